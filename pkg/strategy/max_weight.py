"""
Max-Weight Scheduler Module
Virtual-queue stabilising schedule selection for per-user throughput targets

Flow (per frame):
1. Pick the candidate maximising sum_i backlog_i * rate_i
2. Serve the frame
3. backlog_i <- max(backlog_i + target_i - delivered_i, 0)
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from core.model import RateVector, Schedule
from strategy.selection import Candidate, CandidateSet, as_candidate_set, weighted_argmax

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VirtualQueueState:
    """Deficit of delivered packets against the per-frame target"""
    backlog: np.ndarray
    target: RateVector

    def __post_init__(self):
        backlog = np.asarray(self.backlog, dtype=float).copy()
        if backlog.shape != (len(self.target),):
            raise ValueError(f"Backlog has shape {backlog.shape}, target has {len(self.target)} users")
        if np.any(backlog < 0):
            raise ValueError("Virtual queue backlog must be non-negative")
        backlog.setflags(write=False)
        object.__setattr__(self, 'backlog', backlog)

    @classmethod
    def empty(cls, target: RateVector) -> 'VirtualQueueState':
        return cls(np.zeros(len(target)), target)

    @property
    def total(self) -> float:
        return float(self.backlog.sum())

    def __str__(self):
        return "VirtualQueueState(" + ", ".join(f"{b:.3f}" for b in self.backlog) + ")"


def maxweight_select(q: VirtualQueueState, candidates: Sequence[Candidate]) -> Schedule:
    """Candidate with the largest backlog-weighted expected rate"""
    candidate_set = as_candidate_set(candidates)
    return candidate_set.schedules[weighted_argmax(q.backlog, candidate_set)]


def maxweight_index(q: VirtualQueueState, candidates: CandidateSet) -> int:
    return weighted_argmax(q.backlog, candidates)


def update_virtual_queues(q: VirtualQueueState, delivered) -> VirtualQueueState:
    """One frame of arrivals (the target) and departures (delivered packets)"""
    delivered = np.asarray(delivered, dtype=float)
    if delivered.shape != q.backlog.shape:
        raise ValueError(f"Delivered vector has shape {delivered.shape}, expected {q.backlog.shape}")
    backlog = np.maximum(q.backlog + q.target.as_array() - delivered, 0.0)
    return VirtualQueueState(backlog, q.target)
