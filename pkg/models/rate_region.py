"""
Rate Region Module
Corner points of static schedules and convex-hull feasibility of rate targets

Includes:
- RateRegion construction from a schedule list (empty schedule always included)
- Hull feasibility LP with free disposal (scipy HiGHS), weights or separating certificate
- Pareto pruning and region containment
- CSV export (schedule, then one rate column per user)

Example:
    >>> region = build_rate_region(enumerate_schedules('extended', 2), channel, frame)
    >>> result = hull_feasible(RateVector((0.6, 0.5)), region)
    >>> print(result)
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.optimize import linprog

from core.model import ChannelParams, FrameConfig, RateVector, Schedule
from models.expected_rate import expected_rate
from utils.csv_export import write_table

logger = logging.getLogger(__name__)

# Values within this band of a face count as feasible
FEASIBILITY_TOLERANCE = 1e-9
# Rate vectors closer than this are duplicates
DEDUPE_DECIMALS = 12


class LPSolverError(RuntimeError):
    """The hull LP did not terminate with an optimal solution"""


@dataclass(frozen=True)
class CornerPoint:
    """A schedule and its expected rate vector"""
    schedule: Schedule
    rates: RateVector

    def __str__(self):
        label = self.schedule.canonical() or "(empty)"
        return f"{label}: {self.rates}"


@dataclass(frozen=True)
class RateRegion:
    """
    Convex hull of corner points under free disposal

    Always contains the origin (the empty schedule).
    """
    corner_points: Tuple[CornerPoint, ...]
    channel: ChannelParams
    frame: FrameConfig

    @classmethod
    def from_candidates(cls,
                        schedules: Iterable[Schedule],
                        channel: ChannelParams,
                        frame: FrameConfig) -> 'RateRegion':
        return build_rate_region(list(schedules), channel, frame)

    @property
    def n_points(self) -> int:
        return len(self.corner_points)

    @property
    def n_users(self) -> int:
        return self.channel.n_users

    @property
    def schedules(self) -> List[Schedule]:
        return [c.schedule for c in self.corner_points]

    def rate_matrix(self) -> np.ndarray:
        """Corner rates, one row per point"""
        if not self.corner_points:
            return np.zeros((0, self.n_users))
        return np.vstack([c.rates.as_array() for c in self.corner_points])

    def to_dataframe(self) -> pd.DataFrame:
        data = {'schedule': [c.schedule.canonical() for c in self.corner_points]}
        matrix = self.rate_matrix()
        for i in range(self.n_users):
            data[f'user_{i + 1}'] = matrix[:, i]
        return pd.DataFrame(data)

    def __str__(self):
        lines = [f"RateRegion({self.channel}, tau={self.frame.tau}, {self.n_points} corner points)"]
        lines.extend(f"  {c}" for c in self.corner_points)
        return "\n".join(lines)


def build_rate_region(schedules: Sequence[Schedule],
                      channel: ChannelParams,
                      frame: FrameConfig) -> RateRegion:
    """
    Map every schedule through expected_rate

    The empty schedule is always included. Identical rate vectors are merged
    keeping the lexicographically-first canonical schedule; dominated points
    are kept (see pareto_prune).
    """
    candidates = [Schedule.empty()] + [s for s in schedules if s.groups]

    by_key: Dict[Tuple[float, ...], CornerPoint] = {}
    order: List[Tuple[float, ...]] = []
    for schedule in candidates:
        rates = expected_rate(schedule, channel, frame)
        key = tuple(np.round(rates.as_array(), DEDUPE_DECIMALS))
        kept = by_key.get(key)
        if kept is None:
            by_key[key] = CornerPoint(schedule, rates)
            order.append(key)
        elif schedule.canonical() < kept.schedule.canonical():
            by_key[key] = CornerPoint(schedule, rates)

    region = RateRegion(tuple(by_key[k] for k in order), channel, frame)
    logger.debug(f"Built rate region: {len(candidates)} schedules -> {region.n_points} corner points")
    return region


@dataclass
class SeparatingCertificate:
    """Direction w >= 0 (sum 1) with w.d > max over corners of w.r"""
    direction: np.ndarray
    support: float
    gap: float

    def __str__(self):
        w = ", ".join(f"{x:.4f}" for x in self.direction)
        return f"w=({w}), max w.r={self.support:.6f}, gap={self.gap:.3e}"


@dataclass
class HullFeasibility:
    """Outcome of hull_feasible"""
    feasible: bool
    slack: float
    weights: np.ndarray
    region: RateRegion = field(repr=False)
    certificate: Optional[SeparatingCertificate] = None

    def support(self, threshold: float = 1e-12) -> List[Tuple[Schedule, float]]:
        """Schedules carrying positive time-sharing weight"""
        return [(c.schedule, float(w))
                for c, w in zip(self.region.corner_points, self.weights) if w > threshold]

    def __str__(self):
        if self.feasible:
            parts = ", ".join(f"{s.canonical() or '(empty)'}:{w:.4f}" for s, w in self.support())
            return f"FEASIBLE (slack={self.slack:.3e}) weights [{parts}]"
        return f"INFEASIBLE (slack={self.slack:.3e}) certificate {self.certificate}"


def hull_feasible(d: RateVector,
                  region: RateRegion,
                  tolerance: float = FEASIBILITY_TOLERANCE) -> HullFeasibility:
    """
    Is d dominated by a convex combination of the region's corner points?

    Solves  max t  s.t.  R^T lambda >= d + t,  sum lambda = 1,  lambda >= 0,  t <= 1
    and accepts when t* >= -tolerance. On rejection the inequality duals give
    the separating direction.

    Raises:
        LPSolverError: solver did not reach an optimum
    """
    if len(d) != region.n_users:
        raise ValueError(f"Dimension mismatch: target has {len(d)} entries, region has N={region.n_users}")
    if region.n_points == 0:
        raise ValueError("Rate region has no corner points")

    target = d.as_array()
    rates = region.rate_matrix()
    k = region.n_points

    # A single corner dominating d needs no LP
    dominating = np.flatnonzero(np.all(rates >= target - tolerance, axis=1))
    if dominating.size:
        weights = np.zeros(k)
        weights[dominating[0]] = 1.0
        slack = float(np.min(rates[dominating[0]] - target))
        return HullFeasibility(True, slack, weights, region)

    n = region.n_users
    c = np.zeros(k + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-rates.T, np.ones((n, 1))])
    b_ub = -target
    a_eq = np.hstack([np.ones((1, k)), np.zeros((1, 1))])
    bounds = [(0.0, None)] * k + [(None, 1.0)]

    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=[1.0], bounds=bounds, method='highs')
    if res.status != 0:
        raise LPSolverError(f"Hull LP failed (status {res.status}): {res.message}")

    weights = np.clip(res.x[:k], 0.0, None)
    slack = float(res.x[-1])
    if slack >= -tolerance:
        total = weights.sum()
        return HullFeasibility(True, slack, weights / total if total > 0 else weights, region)

    duals = -np.asarray(res.ineqlin.marginals, dtype=float)
    duals = np.clip(duals, 0.0, None)
    if duals.sum() > 0:
        direction = duals / duals.sum()
    else:
        direction = np.full(n, 1.0 / n)
    support = float(np.max(rates @ direction))
    certificate = SeparatingCertificate(direction, support, float(direction @ target - support))
    logger.debug(f"Target {d} outside hull: {certificate}")
    return HullFeasibility(False, slack, weights, region, certificate)


def pareto_prune(region: RateRegion) -> RateRegion:
    """Drop corner points dominated by another single corner; the origin stays"""
    rates = region.rate_matrix()
    kept = []
    for i, corner in enumerate(region.corner_points):
        if not corner.schedule.groups:
            kept.append(corner)
            continue
        others = np.delete(rates, i, axis=0)
        dominated = np.any(np.all(others >= rates[i], axis=1) & np.any(others > rates[i], axis=1))
        if not dominated:
            kept.append(corner)
    return RateRegion(tuple(kept), region.channel, region.frame)


@dataclass
class RegionContainment:
    """Whether every corner of `inner` lies in the hull of `outer`"""
    contained: bool
    outside: List[CornerPoint]

    def __str__(self):
        if self.contained:
            return "contained"
        return "not contained; outside: " + ", ".join(str(c) for c in self.outside)


def region_contains(outer: RateRegion,
                    inner: RateRegion,
                    tolerance: float = FEASIBILITY_TOLERANCE) -> RegionContainment:
    """Every corner point of `inner` is hull-feasible in `outer`"""
    outside = [corner for corner in inner.corner_points
               if not hull_feasible(corner.rates, outer, tolerance).feasible]
    return RegionContainment(not outside, outside)


def export_region_csv(region: RateRegion, path: Union[str, Path]) -> Path:
    """One row per corner point: canonical schedule, then N rates"""
    return write_table(region.to_dataframe(), path)
