"""
Candidate Generation Module
Restricted per-frame candidate sets for cells too large to enumerate

Polling candidates:
- the empty schedule and every singleton
- all users in descending weight_i * p_i order (best polling vertex for the weights)

Extended candidates add, on top of the polling ones:
- each adjacent pair of that ordering combined into one group at the pair's position
- optionally the ordering with every consecutive pair merged

Candidate sets are rebuilt every `refresh_every` frames; rates come from the
cached expected rate computation.
"""

import logging
from typing import List, Optional

import numpy as np

from core.model import ChannelParams, FrameConfig, Schedule
from models.expected_rate import expected_rate
from models.multicast_gain import combine_pair
from strategy.selection import CandidateSet

logger = logging.getLogger(__name__)

DEFAULT_REFRESH_EVERY = 10


def weighted_polling_order(weights: np.ndarray, channel: ChannelParams) -> List[int]:
    """Users by descending weight_i * p_i, ties by index"""
    key = np.asarray(weights, dtype=float) * channel.p
    return sorted(range(channel.n_users), key=lambda i: (-key[i], i))


def merge_consecutive_pairs(order: List[int]) -> Schedule:
    """(o1+o2)/(o3+o4)/... with a trailing singleton for odd lengths"""
    groups = [order[k:k + 2] for k in range(0, len(order), 2)]
    return Schedule.from_groups(groups)


class GreedyCandidateGenerator:
    """
    Weight-driven candidate sets for the per-frame schedulers

    Example:
        >>> generator = GreedyCandidateGenerator(channel, frame, model='extended')
        >>> candidates = generator.candidates(weights, frame_index=0)
    """

    def __init__(self,
                 channel: ChannelParams,
                 frame: FrameConfig,
                 model: str = 'extended',
                 refresh_every: int = DEFAULT_REFRESH_EVERY,
                 merge_pairs: bool = True,
                 max_pair_position: Optional[int] = None):
        """
        Args:
            channel: ON probabilities
            frame: Frame length
            model: 'polling' or 'extended'
            refresh_every: Frames between candidate rebuilds
            merge_pairs: Also offer the ordering with all consecutive pairs merged
            max_pair_position: Only combine pairs starting before this position (None = all)
        """
        if model not in ('polling', 'extended'):
            raise ValueError(f"Unknown contention model: {model}")
        if refresh_every < 1:
            raise ValueError(f"refresh_every must be >= 1, got {refresh_every}")

        self.channel = channel
        self.frame = frame
        self.model = model
        self.refresh_every = refresh_every
        self.merge_pairs = merge_pairs
        self.max_pair_position = max_pair_position

        self._cached: Optional[CandidateSet] = None
        self._built_at: Optional[int] = None
        self.rebuilds = 0

        logger.info(f"GreedyCandidateGenerator initialized (model={model}, N={channel.n_users}, "
                    f"tau={frame.tau}, refresh_every={refresh_every})")

    def schedules(self, weights: np.ndarray) -> List[Schedule]:
        """Candidate schedules for the given weights (deduplicated, stable order)"""
        n = self.channel.n_users
        order = weighted_polling_order(weights, self.channel)
        full = Schedule.polling(order)

        schedules = [Schedule.empty()] + [Schedule.polling([u]) for u in range(n)] + [full]

        if self.model == 'extended' and n >= 2:
            last = n - 1 if self.max_pair_position is None else min(self.max_pair_position, n - 1)
            for k in range(last):
                schedules.append(combine_pair(full, order[k], order[k + 1]))
            if self.merge_pairs:
                schedules.append(merge_consecutive_pairs(order))

        unique = list(dict.fromkeys(schedules))
        return unique

    def candidates(self, weights: np.ndarray, frame_index: int) -> CandidateSet:
        """Cached candidate set, rebuilt every refresh_every frames"""
        stale = (self._cached is None
                 or frame_index - self._built_at >= self.refresh_every
                 or frame_index < self._built_at)
        if stale:
            schedules = self.schedules(weights)
            self._cached = CandidateSet.from_pairs(
                [(s, expected_rate(s, self.channel, self.frame)) for s in schedules])
            self._built_at = frame_index
            self.rebuilds += 1
        return self._cached
