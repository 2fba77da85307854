"""
Test Multicast Gain

Single-slot group points against the polling planes and pair combination
"""

import numpy as np
import pytest

from core.enumeration import enumerate_polling_schedules
from core.model import ChannelParams, ContentionGroup, FrameConfig, RateVector, Schedule
from models.multicast_gain import (
    combine_pair,
    factor_n_gain,
    multicast_gain_holds,
    pairwise_enhancements,
)
from models.rate_region import build_rate_region, hull_feasible


def test_two_user_boundary():
    """Test 1: k=2, p=(0.5,0.5) -> margin 0, not strict"""
    gain = multicast_gain_holds(ContentionGroup.of(0, 1), ChannelParams((0.5, 0.5)))
    assert gain.margin == pytest.approx(0.0, abs=1e-15)
    assert gain.holds
    assert not gain.strict


def test_three_user_strict_gain():
    """Test 2: k=3, p=1/3 each -> load 4/3, margin 1/3"""
    third = 1.0 / 3.0
    gain = multicast_gain_holds(ContentionGroup.of(0, 1, 2), ChannelParams((third, third, third)))
    assert gain.load == pytest.approx(4.0 / 3.0)
    assert gain.margin == pytest.approx(1.0 / 3.0)
    assert gain.holds and gain.strict


def test_reference_pair_lies_outside_polling_region(channel):
    """Test 3: p=(0.3,0.2) -> load 0.8 + 0.7 = 1.5; the point is outside the tau=1 polling hull"""
    gain = multicast_gain_holds(ContentionGroup.of(0, 1), channel)
    assert gain.point == pytest.approx((0.24, 0.14))
    assert gain.load == pytest.approx(1.5)
    assert gain.margin == pytest.approx(0.5)
    assert gain.strict

    region = build_rate_region(enumerate_polling_schedules(2, 2), channel, FrameConfig(1))
    assert not hull_feasible(RateVector(gain.point), region).feasible


def test_premise_fails_for_large_probability():
    gain = multicast_gain_holds(ContentionGroup.of(0, 1), ChannelParams((0.9, 0.2)))
    assert not gain.holds
    assert not gain.strict


def test_strict_whenever_k_above_two():
    for p in (0.05, 0.1, 0.2, 0.25):
        gain = multicast_gain_holds(ContentionGroup.of(0, 1, 2, 3), ChannelParams((p,) * 4))
        assert gain.margin > 0, f"p={p}"


def test_random_groups_within_premise():
    """p_i <= 1/k never loses; the gain is strict unless k = 2 with both p_i = 1/2"""
    rng = np.random.default_rng(11)
    for _ in range(1000):
        k = int(rng.integers(2, 5))
        probs = rng.uniform(0.0, 1.0 / k, size=k)
        # some members sit exactly on the 1/k limit
        probs[rng.random(k) < 0.3] = 1.0 / k
        channel = ChannelParams(tuple(float(x) for x in probs))
        gain = multicast_gain_holds(ContentionGroup.of(*range(k)), channel)

        assert gain.holds
        assert gain.margin >= -1e-12, f"{gain}"
        if k > 2 or np.any(probs < 1.0 / k - 1e-9):
            assert gain.margin > 0, f"{gain}"
            assert gain.strict


def test_group_guards(channel):
    with pytest.raises(ValueError):
        multicast_gain_holds(ContentionGroup.of(0), channel)
    with pytest.raises(ValueError):
        multicast_gain_holds(ContentionGroup.of(0, 2), channel)


def test_factor_n_gain():
    assert factor_n_gain(1, 0.4) == pytest.approx(1.0)
    assert factor_n_gain(10, 0.001) == pytest.approx(9.910, abs=1e-3)
    assert factor_n_gain(10, 0.001) > 0.99 * 10
    assert factor_n_gain(2, 0.5) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        factor_n_gain(3, 0.0)


def test_factor_n_gain_sweep():
    """N (1-p)^(N-1) >= 0.99 N whenever (N - 1) p <= 0.01"""
    for n in range(1, 21):
        p_max = 1e-3 if n == 1 else min(1e-3, 0.01 / (n - 1))
        for p in np.geomspace(1e-7, p_max, 25):
            ratio = factor_n_gain(n, p)
            assert ratio == pytest.approx(n * np.exp((n - 1) * np.log1p(-p)), rel=1e-12)
            assert ratio >= 0.99 * n, f"n={n}, p={p}"

    # at p = 1e-3 the bound holds up to N = 11 only
    assert factor_n_gain(11, 1e-3) >= 0.99 * 11
    assert factor_n_gain(12, 1e-3) < 0.99 * 12


def test_combine_pair_takes_earlier_position():
    assert combine_pair(Schedule.parse("1/2/3"), 0, 2).canonical() == "(1+3)/2"
    assert combine_pair(Schedule.parse("3/1/2"), 1, 0).canonical() == "3/(1+2)"


def test_combine_pair_guards():
    with pytest.raises(ValueError):
        combine_pair(Schedule.parse("(1+2)/3"), 0, 2)
    with pytest.raises(ValueError):
        combine_pair(Schedule.parse("1/2"), 0, 0)
    with pytest.raises(ValueError):
        combine_pair(Schedule.parse("1/2"), 0, 2)


def test_pairwise_enhancements():
    pairs = pairwise_enhancements(Schedule.parse("2/1/3"))
    assert [p for p, _ in pairs] == [(0, 1), (0, 2), (1, 2)]
    assert [s.canonical() for _, s in pairs] == ["(1+2)/3", "2/(1+3)", "(2+3)/1"]
