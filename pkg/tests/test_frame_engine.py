"""
Test Frame Execution Engine

Hand-stepped frames and agreement between the per-frame and batch engines
"""

import numpy as np
import pytest

from core.frame_engine import ChannelMatrix, execute_frame, execute_frames_batch
from core.model import COLLISION, IDLE, FrameConfig, OutcomeKind, Schedule, SlotOutcome


def test_polling_both_users_on_when_addressed():
    """Test 1: 1/2 with user 1 ON in slot 1 and user 2 ON in slot 2"""
    matrix = ChannelMatrix.from_rows([[1, 0], [0, 1]])
    trace = execute_frame(Schedule.parse("1/2"), matrix)

    assert trace.outcomes == (SlotOutcome.success(0), SlotOutcome.success(1))
    assert trace.success == (True, True)


def test_group_collision():
    """Test 2: (1+2) with both ON -> Collision, nobody delivers"""
    trace = execute_frame(Schedule.parse("(1+2)"), ChannelMatrix.from_rows([[1], [1]]))

    assert trace.outcomes == (COLLISION,)
    assert trace.n_delivered == 0


def test_group_residual_stage():
    """Test 3: (1+2), on=[[0,1,0],[0,1,1]] -> Idle, Collision, Success(2)"""
    matrix = ChannelMatrix.from_rows([[0, 1, 0], [0, 1, 1]])
    trace = execute_frame(Schedule.parse("(1+2)"), matrix, FrameConfig(3))

    assert trace.outcomes == (IDLE, COLLISION, SlotOutcome.success(1))
    assert trace.success == (False, True)


def test_residual_member_addressed_alone():
    """After user 1 succeeds, user 2 is addressed alone and cannot collide with user 1"""
    matrix = ChannelMatrix.from_rows([[1, 1], [0, 1]])
    trace = execute_frame(Schedule.parse("(1+2)"), matrix)

    assert trace.outcomes == (SlotOutcome.success(0), SlotOutcome.success(1))


def test_slots_after_schedule_are_idle():
    trace = execute_frame(Schedule.parse("1"), ChannelMatrix.from_rows([[1, 1, 1]]))
    assert trace.outcomes == (SlotOutcome.success(0), IDLE, IDLE)
    assert execute_frame(Schedule.empty(), ChannelMatrix.from_rows([[1, 1]])).n_delivered == 0


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        execute_frame(Schedule.parse("1"), ChannelMatrix.from_rows([[1, 1]]), FrameConfig(3))
    with pytest.raises(ValueError):
        execute_frame(Schedule.parse("3"), ChannelMatrix.from_rows([[1], [1]]))


def test_success_only_when_on():
    """A reported success always has the user ON in that slot"""
    rng = np.random.default_rng(3)
    for text in ["1/2/3", "(1+2)/3", "(1+2+3)", "3/(1+2)"]:
        schedule = Schedule.parse(text)
        for _ in range(100):
            on = rng.random((3, 6)) < 0.4
            trace = execute_frame(schedule, ChannelMatrix(on))
            for t, outcome in enumerate(trace.outcomes):
                if outcome.kind is OutcomeKind.SUCCESS:
                    assert on[outcome.user, t]
            assert sum(o.is_success for o in trace.outcomes) == trace.n_delivered


def test_polling_order_is_respected():
    """Under i1/i2/... user i_j delivers only if every earlier user delivered"""
    rng = np.random.default_rng(5)
    schedule = Schedule.parse("3/1/2")
    for _ in range(300):
        trace = execute_frame(schedule, ChannelMatrix(rng.random((3, 5)) < 0.5))
        flags = [trace.success[u] for u in schedule.users]
        assert flags == sorted(flags, reverse=True)


@pytest.mark.parametrize("text", ["", "1/2/3", "2/(1+3)", "(1+2+3)", "(2+3)/1"])
def test_batch_matches_single_frame(text):
    schedule = Schedule.parse(text)
    rng = np.random.default_rng(17)
    on = rng.random((400, 3, 5)) < 0.45

    batch = execute_frames_batch(schedule, on)
    single = np.array([execute_frame(schedule, ChannelMatrix(on[f])).success for f in range(on.shape[0])])
    assert np.array_equal(batch, single)
