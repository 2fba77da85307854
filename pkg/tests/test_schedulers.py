"""
Test Per-Frame Schedulers

Selection tie-breaks, max-weight and proportional fair state updates, and
candidate generation for large cells
"""

import numpy as np
import pytest

from core.model import ChannelParams, FrameConfig, RateVector, Schedule
from strategy.candidates import GreedyCandidateGenerator, merge_consecutive_pairs, weighted_polling_order
from strategy.max_weight import VirtualQueueState, maxweight_select, update_virtual_queues
from strategy.proportional_fair import FairnessState, pf_select, update_fairness
from strategy.selection import CandidateSet, weighted_argmax


@pytest.fixture
def polling_candidates(polling_region):
    return [(c.schedule, c.rates) for c in polling_region.corner_points]


@pytest.fixture
def extended_candidates(extended_region):
    return [(c.schedule, c.rates) for c in extended_region.corner_points]


# ========== SELECTION ==========

def test_zero_backlog_picks_empty_schedule(polling_candidates):
    """Test 1: all scores tie at 0 -> lexicographically-first label ''"""
    q = VirtualQueueState.empty(RateVector((0.6, 0.5)))
    assert maxweight_select(q, polling_candidates).canonical() == ""


def test_ties_go_to_smallest_label(polling_candidates):
    """Test 2: weight on one user ties '1' with '1/2' and '2' with '2/1'"""
    target = RateVector((0.6, 0.5))
    assert maxweight_select(VirtualQueueState(np.array([1.0, 0.0]), target),
                            polling_candidates).canonical() == "1"
    assert maxweight_select(VirtualQueueState(np.array([0.0, 1.0]), target),
                            polling_candidates).canonical() == "2"


def test_selection_is_scale_invariant(extended_candidates):
    rng = np.random.default_rng(4)
    target = RateVector((0.6, 0.5))
    for _ in range(200):
        backlog = rng.random(2) * 5
        base = maxweight_select(VirtualQueueState(backlog, target), extended_candidates)
        for scale in (0.01, 3.0, 1e4):
            scaled = maxweight_select(VirtualQueueState(backlog * scale, target), extended_candidates)
            assert scaled == base


def test_balanced_backlog_prefers_group(extended_candidates):
    q = VirtualQueueState(np.array([1.0, 1.0]), RateVector((0.6, 0.5)))
    assert maxweight_select(q, extended_candidates).canonical() == "(1+2)"


def test_weighted_argmax_guards(extended_candidates):
    candidates = CandidateSet.from_pairs(extended_candidates)
    with pytest.raises(ValueError):
        weighted_argmax(np.ones(3), candidates)
    with pytest.raises(ValueError):
        CandidateSet.from_pairs([])


# ========== STATE UPDATES ==========

def test_virtual_queue_update():
    q = VirtualQueueState.empty(RateVector((0.6, 0.5)))
    q = update_virtual_queues(q, [1, 0])
    assert q.backlog.tolist() == pytest.approx([0.0, 0.5])

    q = update_virtual_queues(q, [0, 1])
    assert q.backlog.tolist() == pytest.approx([0.6, 0.0])
    assert q.total == pytest.approx(0.6)


def test_virtual_queue_never_negative():
    rng = np.random.default_rng(8)
    q = VirtualQueueState.empty(RateVector((0.2, 0.1, 0.3)))
    for _ in range(500):
        q = update_virtual_queues(q, rng.integers(0, 2, size=3))
        assert np.all(q.backlog >= 0)
    with pytest.raises(ValueError):
        VirtualQueueState(np.array([-1.0, 0.0]), RateVector((0.1, 0.1)))


def test_fairness_update():
    f = FairnessState.initial(2, ewma_weight=0.01)
    f = update_fairness(f, [1, 0])
    assert f.avg_throughput.tolist() == pytest.approx([0.505, 0.495])
    assert f.gradient.tolist() == pytest.approx([1 / 0.505, 1 / 0.495])


def test_fairness_floor():
    f = FairnessState(np.array([1e-7, 0.3]), ewma_weight=0.5, floor=1e-6)
    assert f.avg_throughput[0] == 1e-6
    for _ in range(50):
        f = update_fairness(f, [0, 0])
    assert np.all(f.avg_throughput >= 1e-6)
    with pytest.raises(ValueError):
        FairnessState(np.ones(2), ewma_weight=0.0)


def test_pf_prefers_starved_user(polling_candidates):
    f = FairnessState(np.array([0.9, 0.01]))
    # 2/1 adds a little for user 1 on top of what 2 gives user 2
    assert pf_select(f, polling_candidates).canonical() == "2/1"


# ========== CANDIDATE GENERATION ==========

def test_weighted_polling_order():
    channel = ChannelParams((0.3, 0.2, 0.5))
    assert weighted_polling_order(np.ones(3), channel) == [2, 0, 1]
    assert weighted_polling_order(np.array([1.0, 10.0, 1.0]), channel) == [1, 2, 0]


def test_merge_consecutive_pairs():
    assert merge_consecutive_pairs([2, 0, 1]).canonical() == "(1+3)/2"
    assert merge_consecutive_pairs([3, 1, 0, 2]).canonical() == "(2+4)/(1+3)"


def test_generator_schedules():
    channel = ChannelParams((0.3, 0.2, 0.5))
    frame = FrameConfig(4)

    extended = GreedyCandidateGenerator(channel, frame, model='extended').schedules(np.ones(3))
    assert [s.canonical() for s in extended] == ["", "1", "2", "3", "3/1/2", "(1+3)/2", "3/(1+2)"]

    polling = GreedyCandidateGenerator(channel, frame, model='polling').schedules(np.ones(3))
    assert all(s.is_polling for s in polling)
    assert len(polling) == 5


def test_generator_refresh():
    channel = ChannelParams((0.3, 0.2, 0.5))
    generator = GreedyCandidateGenerator(channel, FrameConfig(4), refresh_every=10)

    first = generator.candidates(np.ones(3), 0)
    assert generator.candidates(np.array([5.0, 1.0, 1.0]), 5) is first
    assert generator.rebuilds == 1

    generator.candidates(np.array([5.0, 1.0, 1.0]), 10)
    assert generator.rebuilds == 2
    assert Schedule.parse("1/3/2") in generator._cached.schedules


def test_generator_guards():
    channel = ChannelParams((0.3, 0.2))
    with pytest.raises(ValueError):
        GreedyCandidateGenerator(channel, FrameConfig(4), model='dynamic')
    with pytest.raises(ValueError):
        GreedyCandidateGenerator(channel, FrameConfig(4), refresh_every=0)
