"""
Candidate schedules and weighted selection shared by the per-frame schedulers
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from core.model import RateVector, Schedule

logger = logging.getLogger(__name__)

# Scores within this relative band of the best are ties
TIE_TOLERANCE = 1e-12

Candidate = Tuple[Schedule, RateVector]


@dataclass(frozen=True)
class CandidateSet:
    """Schedules with their expected rates, ready for vectorised scoring"""
    schedules: Tuple[Schedule, ...]
    rates: np.ndarray
    labels: Tuple[str, ...]
    label_rank: np.ndarray

    @classmethod
    def from_pairs(cls, candidates: Sequence[Candidate]) -> 'CandidateSet':
        if not candidates:
            raise ValueError("Candidate list is empty")
        schedules = tuple(s for s, _ in candidates)
        widths = {len(r) for _, r in candidates}
        if len(widths) != 1:
            raise ValueError(f"Candidate rate vectors have mixed lengths: {sorted(widths)}")
        rates = np.vstack([r.as_array() for _, r in candidates])
        labels = tuple(s.canonical() for s in schedules)
        rank = np.empty(len(labels), dtype=int)
        rank[np.argsort(np.asarray(labels, dtype=object), kind='stable')] = np.arange(len(labels))
        return cls(schedules, rates, labels, rank)

    @property
    def n_users(self) -> int:
        return self.rates.shape[1]

    def __len__(self):
        return len(self.schedules)

    def pairs(self) -> List[Candidate]:
        return [(s, RateVector.from_array(r)) for s, r in zip(self.schedules, self.rates)]


def weighted_argmax(weights: np.ndarray, candidates: CandidateSet) -> int:
    """
    Index of the candidate maximising sum_i weights_i * rate_i

    Ties (relative band TIE_TOLERANCE) go to the lexicographically-first
    canonical schedule string.
    """
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (candidates.n_users,):
        raise ValueError(f"Weight vector has shape {weights.shape}, expected ({candidates.n_users},)")

    scores = candidates.rates @ weights
    best = scores.max()
    ties = np.flatnonzero(best - scores <= TIE_TOLERANCE * abs(best))
    return int(ties[np.argmin(candidates.label_rank[ties])])


def as_candidate_set(candidates) -> CandidateSet:
    if isinstance(candidates, CandidateSet):
        return candidates
    return CandidateSet.from_pairs(list(candidates))
