"""
Test Cellular Drop

Path loss, ON probabilities, drop sampling and the polling vs extended comparison
"""

import math

import numpy as np
import pytest

from analysis.cellular import (
    CellularScenario,
    cellular_on_probabilities,
    comparison_tolerance,
    dbm_to_watts,
    generate_cellular_drop,
    mean_received_power,
    run_cellular_comparison,
)
from analysis.statistics import cdf_dominates, decile_values
from core.model import FrameConfig, Schedule


def test_dbm_to_watts():
    assert dbm_to_watts(30) == pytest.approx(1.0)
    assert dbm_to_watts(10) == pytest.approx(0.01)
    assert dbm_to_watts(-90) == pytest.approx(1e-12)


def test_on_probability_at_cell_edge():
    """Test 1: r = 1000 m, 1 W, exponent 4, threshold -90 dBm -> p = e^-1"""
    scenario = CellularScenario(n_users=2, positions=((1000.0, 0.0), (0.0, 500.0)),
                                fade_margin_threshold=dbm_to_watts(-90))
    p = cellular_on_probabilities(scenario).on_prob

    assert p[0] == pytest.approx(math.exp(-1.0), rel=1e-9)
    assert p[1] == pytest.approx(math.exp(-1.0 / 16.0), rel=1e-9)


def test_distance_clamped_at_reference():
    scenario = CellularScenario(n_users=1, positions=((0.5, 0.0),))
    assert mean_received_power(scenario)[0] == pytest.approx(1.0)


def test_probability_decreases_with_distance():
    scenario = generate_cellular_drop(7, n_users=50, threshold_dbm=-90)
    distances = scenario.distances
    p = np.asarray(cellular_on_probabilities(scenario).on_prob)
    order = np.argsort(distances)
    assert np.all(np.diff(p[order]) <= 1e-15)


def test_mean_distance_in_disk():
    """Uniform over the disk: E[r] = 2R/3"""
    scenario = generate_cellular_drop(11, n_users=20000, cell_radius=1000.0)
    assert scenario.distances.mean() == pytest.approx(2000.0 / 3.0, abs=8.0)
    assert scenario.distances.max() <= 1000.0


def test_drops_are_reproducible():
    a = generate_cellular_drop(3, n_users=10)
    b = generate_cellular_drop(3, n_users=10)
    c = generate_cellular_drop(3, n_users=10, drop_index=1)
    assert a == b
    assert a.positions != c.positions


def test_json_round_trip(tmp_path):
    scenario = generate_cellular_drop(5, n_users=4, threshold_dbm=-85)
    assert CellularScenario.from_json(scenario.to_json()) == scenario

    path = tmp_path / "drop.json"
    scenario.to_json(path)
    assert CellularScenario.from_json(path) == scenario


def test_scenario_guards():
    with pytest.raises(ValueError):
        CellularScenario(n_users=1, positions=((2000.0, 0.0),))
    with pytest.raises(ValueError):
        CellularScenario(n_users=2, positions=((1.0, 0.0),))
    with pytest.raises(ValueError):
        CellularScenario(n_users=1, tx_power=0.0)
    with pytest.raises(ValueError):
        CellularScenario(n_users=3).distances


def test_comparison_runs_on_shared_channel():
    scenario = generate_cellular_drop(2, n_users=6, threshold_dbm=-90)
    frame = FrameConfig(6)
    results = run_cellular_comparison(scenario, frame, n_frames=300, seed=2, ewma_weight=0.01,
                                      floor=1e-6, refresh_every=10)
    again = run_cellular_comparison(scenario, frame, n_frames=300, seed=2, ewma_weight=0.01,
                                    floor=1e-6, refresh_every=10)

    assert set(results) == {'polling', 'extended'}
    for model in ('polling', 'extended'):
        assert results[model].per_user_throughput.n_users == 6
        assert np.array_equal(results[model].successes, again[model].successes)
    assert all(Schedule.parse(label).is_polling for label in results['polling'].schedule_usage)


def test_comparison_tolerance_uses_widest_halfwidth():
    scenario = generate_cellular_drop(4, n_users=5, threshold_dbm=-90)
    results = run_cellular_comparison(scenario, FrameConfig(5), n_frames=400, seed=4, ewma_weight=0.01,
                                      floor=1e-6, refresh_every=10)
    widest = max(float(np.max(r.ci_halfwidth)) for r in results.values())

    assert comparison_tolerance([results]) == pytest.approx(3.0 * widest)
    assert comparison_tolerance([results], sigmas=1.0) == pytest.approx(widest)
    assert comparison_tolerance([]) == 0.0


@pytest.mark.slow
def test_extended_cdf_right_of_polling_over_five_drops():
    """Pooled over 5 drops the extended CDF is weakly right of polling at every decile"""
    frame = FrameConfig(30)
    seed = 7
    per_drop = []
    polling, extended = [], []
    for k in range(5):
        scenario = generate_cellular_drop(seed, n_users=30, threshold_dbm=-90, drop_index=k)
        results = run_cellular_comparison(scenario, frame, n_frames=20000, seed=seed, ewma_weight=0.01,
                                          floor=1e-6, refresh_every=10, drop_index=k)
        per_drop.append(results)
        polling.extend(results['polling'].per_user_throughput.rates)
        extended.extend(results['extended'].per_user_throughput.rates)

    tolerance = comparison_tolerance(per_drop)
    gaps = decile_values(extended) - decile_values(polling)
    assert cdf_dominates(extended, polling, tolerance), f"tolerance={tolerance:.4f}, gaps={gaps}"
