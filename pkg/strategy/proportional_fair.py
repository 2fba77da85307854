"""
Proportional Fair Scheduler Module
Gradient selection for sum_i log(average throughput)

Each frame picks the candidate maximising sum_i rate_i / avg_i, then updates
the averages by an EWMA floored at a small positive value.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from core.model import Schedule
from strategy.selection import Candidate, CandidateSet, as_candidate_set, weighted_argmax

logger = logging.getLogger(__name__)

DEFAULT_EWMA_WEIGHT = 0.01
DEFAULT_FLOOR = 1e-6
DEFAULT_INITIAL_AVERAGE = 0.5


@dataclass(frozen=True)
class FairnessState:
    """Running throughput averages (packets per frame) used as gradient weights"""
    avg_throughput: np.ndarray
    ewma_weight: float = DEFAULT_EWMA_WEIGHT
    floor: float = DEFAULT_FLOOR

    def __post_init__(self):
        if not 0.0 < self.ewma_weight <= 1.0:
            raise ValueError(f"ewma_weight must be in (0, 1], got {self.ewma_weight}")
        if self.floor <= 0.0:
            raise ValueError(f"floor must be positive, got {self.floor}")
        avg = np.maximum(np.asarray(self.avg_throughput, dtype=float), self.floor)
        avg.setflags(write=False)
        object.__setattr__(self, 'avg_throughput', avg)

    @classmethod
    def initial(cls,
                n_users: int,
                ewma_weight: float = DEFAULT_EWMA_WEIGHT,
                floor: float = DEFAULT_FLOOR,
                start: float = DEFAULT_INITIAL_AVERAGE) -> 'FairnessState':
        return cls(np.full(n_users, start), ewma_weight, floor)

    @property
    def gradient(self) -> np.ndarray:
        """d/d avg of sum log avg"""
        return 1.0 / self.avg_throughput

    def __str__(self):
        return "FairnessState(" + ", ".join(f"{a:.4f}" for a in self.avg_throughput) + ")"


def pf_select(f: FairnessState, candidates: Sequence[Candidate]) -> Schedule:
    """Candidate with the largest sum_i rate_i / avg_i"""
    candidate_set = as_candidate_set(candidates)
    return candidate_set.schedules[weighted_argmax(f.gradient, candidate_set)]


def pf_index(f: FairnessState, candidates: CandidateSet) -> int:
    return weighted_argmax(f.gradient, candidates)


def update_fairness(f: FairnessState, delivered) -> FairnessState:
    """avg <- max((1 - w) avg + w delivered, floor)"""
    delivered = np.asarray(delivered, dtype=float)
    if delivered.shape != f.avg_throughput.shape:
        raise ValueError(f"Delivered vector has shape {delivered.shape}, "
                         f"expected {f.avg_throughput.shape}")
    w = f.ewma_weight
    avg = np.maximum((1.0 - w) * f.avg_throughput + w * delivered, f.floor)
    return FairnessState(avg, f.ewma_weight, f.floor)
