"""
Test Expected Rate Computation

DP against the brute-force oracle, reference values for p = (0.3, 0.2), tau = 4,
and the index convention of the two-user closed forms
"""

import numpy as np
import pytest

from core.enumeration import enumerate_group_schedules
from core.model import ChannelParams, FrameConfig, Schedule
from models.expected_rate import (
    ClosedFormConvention,
    brute_force_rate,
    build_stage_chain,
    expected_rate,
    resolve_closed_form_convention,
    two_user_group_rate,
)


# ========== REFERENCE VALUES ==========

def test_single_user_rate():
    """Test 1: 1 - 0.7^4 = 0.7599"""
    rates = expected_rate(Schedule.parse("1"), ChannelParams((0.3,)), FrameConfig(4))
    assert rates[0] == pytest.approx(0.7599, abs=1e-12)


def test_polling_pair(channel, frame):
    """Test 2: 1/2 -> (0.7599, 0.2514); 2/1 -> (0.2514, 0.5904)"""
    assert np.allclose(expected_rate(Schedule.parse("1/2"), channel, frame).as_array(),
                       [0.7599, 0.2514], atol=1e-12)
    assert np.allclose(expected_rate(Schedule.parse("2/1"), channel, frame).as_array(),
                       [0.2514, 0.5904], atol=1e-12)


def test_group_rate(channel, frame):
    """Test 3: (1+2) -> approximately (0.6906, 0.5031)"""
    rates = expected_rate(Schedule.parse("(1+2)"), channel, frame)
    assert rates[0] == pytest.approx(0.6906, abs=1e-4)
    assert rates[1] == pytest.approx(0.5031, abs=1e-4)


def test_brute_force_examples():
    assert brute_force_rate(Schedule.empty(), ChannelParams((0.3, 0.6)), FrameConfig(3)).rates == (0.0, 0.0)
    assert brute_force_rate(Schedule.parse("1"), ChannelParams((1.0,)), FrameConfig(1)).rates == (1.0,)

    rates = brute_force_rate(Schedule.parse("(1+2)"), ChannelParams((0.5, 0.5)), FrameConfig(1))
    assert np.allclose(rates.as_array(), [0.25, 0.25], atol=1e-15)


def test_brute_force_size_guard():
    with pytest.raises(ValueError):
        brute_force_rate(Schedule.parse("1"), ChannelParams((0.5,) * 3), FrameConfig(7))


# ========== ORACLE EQUIVALENCE ==========

@pytest.mark.parametrize("tau", [1, 2, 3, 4, 5])
def test_dp_matches_oracle_two_users(tau):
    channel = ChannelParams((0.35, 0.6))
    frame = FrameConfig(tau)
    for schedule in enumerate_group_schedules(2, 2):
        dp = expected_rate(schedule, channel, frame).as_array()
        oracle = brute_force_rate(schedule, channel, frame).as_array()
        assert np.max(np.abs(dp - oracle)) <= 1e-12, f"{schedule} at tau={tau}"


def test_dp_matches_oracle_three_users():
    channel = ChannelParams((0.3, 0.2, 0.45))
    frame = FrameConfig(4)
    for schedule in enumerate_group_schedules(3, 3):
        dp = expected_rate(schedule, channel, frame).as_array()
        oracle = brute_force_rate(schedule, channel, frame).as_array()
        assert np.max(np.abs(dp - oracle)) <= 1e-12, f"{schedule}"


@pytest.mark.slow
def test_dp_matches_oracle_three_users_five_slots():
    channel = ChannelParams((0.15, 0.5, 0.7))
    frame = FrameConfig(5)
    for text in ["1/2/3", "(1+2)/3", "(1+2+3)", "3/(1+2)", "(2+3)"]:
        schedule = Schedule.parse(text)
        dp = expected_rate(schedule, channel, frame).as_array()
        oracle = brute_force_rate(schedule, channel, frame).as_array()
        assert np.max(np.abs(dp - oracle)) <= 1e-12, text


def test_stage_chain_is_stochastic(channel):
    chain = build_stage_chain(Schedule.parse("(1+2)"), channel)
    # (0, 0), (0, user 1 done), (0, user 2 done), finished
    assert chain.n_states == 4
    assert np.allclose(chain.transition.sum(axis=1), 1.0)
    assert np.all(chain.success.sum(axis=1) <= 1.0 + 1e-15)


def test_rates_bounded_and_zero_for_unscheduled(channel, frame):
    rates = expected_rate(Schedule.parse("2"), channel, frame)
    assert rates[0] == 0.0
    assert 0.0 <= rates[1] <= 1.0


def test_invalid_schedule_rejected(channel, frame):
    with pytest.raises(ValueError):
        expected_rate(Schedule.parse("3"), channel, frame)


# ========== CLOSED FORMS ==========

def test_shifted_closed_form_matches_oracle(channel, frame):
    closed = two_user_group_rate(0.3, 0.2, 4)
    oracle = brute_force_rate(Schedule.parse("(1+2)"), channel, frame).as_array()
    assert np.allclose(closed, oracle, atol=1e-12)


def test_printed_closed_form_differs(channel, frame):
    printed = np.asarray(two_user_group_rate(0.3, 0.2, 4, ClosedFormConvention.PRINTED))
    oracle = brute_force_rate(Schedule.parse("(1+2)"), channel, frame).as_array()
    assert np.max(np.abs(printed - oracle)) > 1e-3


def test_convention_resolves_to_shifted(channel, frame):
    assert resolve_closed_form_convention(channel, frame) is ClosedFormConvention.SHIFTED
    # Past the oracle size the DP is the reference
    assert resolve_closed_form_convention(ChannelParams((0.4, 0.1)), FrameConfig(12)) \
        is ClosedFormConvention.SHIFTED


def test_convention_needs_two_users(frame):
    with pytest.raises(ValueError):
        resolve_closed_form_convention(ChannelParams((0.3, 0.2, 0.1)), frame)
