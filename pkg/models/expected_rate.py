"""
Expected Rate Module
Exact per-frame success probabilities of a static schedule

Includes:
- Dynamic program over (slot, group, already-succeeded members of the active group)
- Brute-force oracle enumerating every channel matrix of a frame
- Closed forms for the two-user (1+2)/(1+2)^c schedule and their index convention

Example:
    >>> channel = ChannelParams((0.3, 0.2))
    >>> rates = expected_rate(Schedule.parse("1/2"), channel, FrameConfig(4))
    >>> print(rates)   # (0.7599, 0.2514)
"""

import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, Optional, Tuple

import numpy as np

from core.frame_engine import ChannelMatrix, execute_frame
from core.model import (
    ChannelParams,
    FrameConfig,
    RateVector,
    Schedule,
    require_valid,
    success_probabilities,
)

logger = logging.getLogger(__name__)

# Oracle enumerates 2^(N*tau) matrices
BRUTE_FORCE_MAX_CELLS = 20


@dataclass(frozen=True)
class StageChain:
    """
    Markov chain of a schedule's service progress within a frame

    State (g, mask): group g is active and `mask` flags its members that
    already succeeded. The last state means every group finished.
    """
    transition: np.ndarray
    success: np.ndarray
    states: Tuple[Tuple[int, int], ...]

    @property
    def n_states(self) -> int:
        return self.transition.shape[0]


def build_stage_chain(schedule: Schedule, channel: ChannelParams) -> StageChain:
    """Transition matrix and per-state success probabilities of a schedule"""
    groups = schedule.groups

    index: Dict[Tuple[int, int], int] = {}
    for g, group in enumerate(groups):
        for mask in range(2 ** group.size - 1):
            index[(g, mask)] = len(index)
    done = len(index)
    n_states = done + 1

    transition = np.zeros((n_states, n_states))
    success = np.zeros((n_states, channel.n_users))
    transition[done, done] = 1.0

    for (g, mask), state in index.items():
        members = groups[g].sorted_members
        full = 2 ** len(members) - 1
        bits = [b for b in range(len(members)) if not mask & (1 << b)]
        addressed = [members[b] for b in bits]
        probs = success_probabilities(addressed, channel.on_prob)

        transition[state, state] += 1.0 - math.fsum(probs)
        for b, user, q in zip(bits, addressed, probs):
            success[state, user] += q
            new_mask = mask | (1 << b)
            if new_mask != full:
                target = index[(g, new_mask)]
            elif g + 1 < len(groups):
                target = index[(g + 1, 0)]
            else:
                target = done
            transition[state, target] += q

    states = tuple(sorted(index, key=index.get)) + ((len(groups), 0),)
    return StageChain(transition, success, states)


@lru_cache(maxsize=16384)
def _expected_rate_cached(schedule: Schedule, channel: ChannelParams, frame: FrameConfig) -> RateVector:
    chain = build_stage_chain(schedule, channel)

    dist = np.zeros(chain.n_states)
    dist[0] = 1.0
    occupancy = np.zeros(chain.n_states)
    for _ in range(frame.slots_per_frame):
        occupancy += dist
        dist = dist @ chain.transition

    return RateVector.from_array(occupancy @ chain.success)


def expected_rate(schedule: Schedule, channel: ChannelParams, frame: FrameConfig) -> RateVector:
    """
    Probability that each user delivers its packet within the frame

    Args:
        schedule: Valid schedule for the channel
        channel: ON probabilities
        frame: Frame length

    Returns:
        RateVector in packets per frame
    """
    require_valid(schedule, channel)
    return _expected_rate_cached(schedule, channel, frame)


def brute_force_rate(schedule: Schedule,
                     channel: ChannelParams,
                     frame: FrameConfig,
                     max_cells: int = BRUTE_FORCE_MAX_CELLS) -> RateVector:
    """
    Exact expectation by enumerating every channel matrix of a frame

    Ground truth for expected_rate and for the closed forms; only tractable
    for N * tau <= max_cells.
    """
    require_valid(schedule, channel)
    n_users, tau = channel.n_users, frame.slots_per_frame
    cells = n_users * tau
    if cells > max_cells:
        raise ValueError(f"Instance too large for brute force: N*tau={cells} > {max_cells}")

    p = channel.on_prob
    terms = [[] for _ in range(n_users)]
    for bits in itertools.product((False, True), repeat=cells):
        on = np.asarray(bits, dtype=bool).reshape(n_users, tau)
        ones = on.sum(axis=1)
        prob = math.prod(p[i] ** int(ones[i]) * (1.0 - p[i]) ** int(tau - ones[i])
                         for i in range(n_users))
        if prob == 0.0:
            continue
        trace = execute_frame(schedule, ChannelMatrix(on))
        for i, delivered in enumerate(trace.success):
            if delivered:
                terms[i].append(prob)

    return RateVector(tuple(math.fsum(t) for t in terms))


class ClosedFormConvention(Enum):
    """Index conventions for the two-user (1+2)/(1+2)^c closed forms"""
    PRINTED = "printed"    # inner term w^l * p_b (1-p_a)^(k-l) p_a, as typeset
    SHIFTED = "shifted"    # inner term w^(l-1) * p_b (1-p_a)^(k-l) p_a


def _two_user_closed_form(pa: float, pb: float, tau: int, convention: ClosedFormConvention) -> float:
    wasted = (1 - pa) * (1 - pb) + pa * pb
    shift = 0 if convention is ClosedFormConvention.PRINTED else 1
    total = []
    for k in range(1, tau + 1):
        total.append(wasted ** (k - 1) * (1 - pb) * pa)
        for l in range(1, k):
            total.append(wasted ** (l - shift) * pb * (1 - pa) ** (k - l) * pa)
    return math.fsum(total)


def two_user_group_rate(p1: float,
                        p2: float,
                        tau: int,
                        convention: ClosedFormConvention = ClosedFormConvention.SHIFTED
                        ) -> Tuple[float, float]:
    """Closed-form user throughputs of the schedule (1+2)/(1+2)^c"""
    return (_two_user_closed_form(p1, p2, tau, convention),
            _two_user_closed_form(p2, p1, tau, convention))


def resolve_closed_form_convention(channel: ChannelParams,
                                   frame: FrameConfig,
                                   tolerance: float = 1e-12) -> Optional[ClosedFormConvention]:
    """
    Which closed-form convention reproduces the oracle for a two-user channel

    The brute-force oracle is used when tractable, otherwise the DP (itself
    checked against the oracle) is the reference.
    """
    if channel.n_users != 2:
        raise ValueError("Closed forms exist only for two users")

    schedule = Schedule.from_groups([[0, 1]])
    if channel.n_users * frame.slots_per_frame <= BRUTE_FORCE_MAX_CELLS:
        reference = brute_force_rate(schedule, channel, frame).as_array()
    else:
        reference = expected_rate(schedule, channel, frame).as_array()

    p1, p2 = channel.on_prob
    for convention in (ClosedFormConvention.SHIFTED, ClosedFormConvention.PRINTED):
        candidate = np.asarray(two_user_group_rate(p1, p2, frame.slots_per_frame, convention))
        if np.max(np.abs(candidate - reference)) <= tolerance:
            logger.debug(f"Closed-form convention resolved: {convention.value}")
            return convention

    logger.warning(f"No closed-form convention matches the oracle for {channel}, tau={frame.tau}")
    return None
