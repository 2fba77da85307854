"""
Test Rate Region & Hull Feasibility

Reference channel p = (0.3, 0.2), tau = 4
"""

import numpy as np
import pandas as pd
import pytest

from core.enumeration import enumerate_group_schedules, enumerate_polling_schedules
from core.model import ChannelParams, FrameConfig, RateVector
from models.rate_region import (
    build_rate_region,
    export_region_csv,
    hull_feasible,
    pareto_prune,
    region_contains,
)


# ========== CONSTRUCTION ==========

def test_region_sizes(polling_region, extended_region):
    """Test 1: 5 polling corner points, 6 extended"""
    assert polling_region.n_points == 5
    assert extended_region.n_points == 6
    assert polling_region.corner_points[0].schedule.canonical() == ""
    assert np.all(polling_region.corner_points[0].rates.as_array() == 0.0)


def test_empty_schedule_list_gives_origin(channel, frame):
    region = build_rate_region([], channel, frame)
    assert region.n_points == 1
    assert region.rate_matrix().tolist() == [[0.0, 0.0]]


def test_duplicate_rates_keep_smallest_label(frame):
    """User 2 never ON: '1' and '1/2' coincide, '2' and '' coincide"""
    channel = ChannelParams((0.3, 0.0))
    region = build_rate_region(enumerate_polling_schedules(2, 2), channel, frame)
    labels = [c.schedule.canonical() for c in region.corner_points]

    assert labels == ["", "1"]


def test_dataframe_layout(extended_region):
    df = extended_region.to_dataframe()
    assert list(df.columns) == ['schedule', 'user_1', 'user_2']
    assert len(df) == 6
    row = df[df['schedule'] == "(1+2)"].iloc[0]
    assert row['user_1'] == pytest.approx(0.6906, abs=1e-4)


def test_csv_export(tmp_path, polling_region):
    path = export_region_csv(polling_region, tmp_path / "region.csv")
    df = pd.read_csv(path, keep_default_na=False)

    assert list(df.columns) == ['schedule', 'user_1', 'user_2']
    assert df['schedule'].tolist() == ["", "1", "2", "1/2", "2/1"]
    assert df.loc[3, 'user_2'] == pytest.approx(0.2514, abs=1e-11)


# ========== FEASIBILITY ==========

def test_target_needs_multicast(polling_region, extended_region):
    """Test 2: (0.6, 0.5) is outside the polling region, inside the extended one"""
    target = RateVector((0.6, 0.5))

    extended = hull_feasible(target, extended_region)
    assert extended.feasible
    assert extended.slack >= 0

    polling = hull_feasible(target, polling_region)
    assert not polling.feasible
    cert = polling.certificate
    assert cert is not None
    assert cert.gap > 0
    assert np.all(cert.direction >= 0)
    assert cert.direction.sum() == pytest.approx(1.0)
    assert cert.support == pytest.approx(np.max(polling_region.rate_matrix() @ cert.direction))
    assert "INFEASIBLE" in str(polling)


def test_corner_point_gets_unit_weight(polling_region):
    rates = polling_region.rate_matrix()
    for corner in polling_region.corner_points:
        result = hull_feasible(corner.rates, polling_region)
        assert result.feasible
        assert sorted(result.weights.tolist())[-1] == 1.0
        assert len(result.support()) == 1
        chosen = rates[int(np.argmax(result.weights))]
        assert np.all(chosen >= corner.rates.as_array())


def test_midpoint_is_feasible(channel, frame, polling_region):
    a = polling_region.corner_points[3].rates.as_array()
    b = polling_region.corner_points[4].rates.as_array()
    result = hull_feasible(RateVector.from_array(0.5 * a + 0.5 * b), polling_region)

    assert result.feasible
    combined = result.weights @ polling_region.rate_matrix()
    assert np.all(combined >= 0.5 * a + 0.5 * b - 1e-9)


def test_inside_and_outside_random_points(extended_region):
    """0.99x a random convex combination accepts; 1.01x a support point rejects"""
    rng = np.random.default_rng(99)
    rates = extended_region.rate_matrix()
    for _ in range(100):
        lam = rng.dirichlet(np.ones(len(rates)))
        inside = RateVector.from_array(0.99 * lam @ rates)
        assert hull_feasible(inside, extended_region).feasible

        w = rng.random(2) + 0.05
        corner = rates[np.argmax(rates @ w)]
        outside = RateVector.from_array(1.01 * corner)
        assert not hull_feasible(outside, extended_region).feasible


def test_more_schedules_never_shrink(polling_region, extended_region):
    rng = np.random.default_rng(1)
    for _ in range(300):
        d = RateVector(tuple(rng.random(2) * 0.8))
        if hull_feasible(d, polling_region).feasible:
            assert hull_feasible(d, extended_region).feasible


def test_dimension_mismatch(polling_region):
    with pytest.raises(ValueError):
        hull_feasible(RateVector((0.1, 0.1, 0.1)), polling_region)


# ========== PRUNING & CONTAINMENT ==========

def test_pareto_prune(polling_region, extended_region):
    assert [c.schedule.canonical() for c in pareto_prune(polling_region).corner_points] == ["", "1/2", "2/1"]
    assert [c.schedule.canonical() for c in pareto_prune(extended_region).corner_points] == \
        ["", "1/2", "2/1", "(1+2)"]


def test_extended_strictly_contains_polling(polling_region, extended_region):
    assert region_contains(extended_region, polling_region).contained

    reverse = region_contains(polling_region, extended_region)
    assert not reverse.contained
    assert [c.schedule.canonical() for c in reverse.outside] == ["(1+2)"]


def test_three_user_group_region_contains_polling():
    """Single-slot frames: the full group point lies beyond every polling plane"""
    channel = ChannelParams((0.2, 0.25, 0.3))
    frame = FrameConfig(1)
    polling = build_rate_region(enumerate_polling_schedules(3, 3), channel, frame)
    extended = build_rate_region(enumerate_group_schedules(3, 3), channel, frame)

    assert region_contains(extended, polling).contained
    outside = region_contains(polling, extended).outside
    assert "(1+2+3)" in [c.schedule.canonical() for c in outside]
