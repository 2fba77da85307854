"""
Policy Runner Module
Frame-by-frame simulation of the max-weight and proportional fair schedulers

Flow (per frame):
1. Select a schedule from the candidates using the policy state
2. Sample the channel matrix and execute the frame
3. Update the virtual queues / fairness averages
4. Every `sample_every` frames record cumulative per-user throughput

Max-weight runs are gated by admission control: the target must lie in the
hull of the candidate rates.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Sequence, Union

import numpy as np
import pandas as pd

from analysis.simulator import SimulationResult, sample_channel_batch
from core.frame_engine import ChannelMatrix, execute_frame
from core.model import ChannelParams, FrameConfig, RateVector
from models.rate_region import CornerPoint, HullFeasibility, RateRegion, hull_feasible
from strategy.candidates import GreedyCandidateGenerator
from strategy.max_weight import VirtualQueueState, maxweight_index, update_virtual_queues
from strategy.proportional_fair import (
    DEFAULT_EWMA_WEIGHT,
    DEFAULT_FLOOR,
    FairnessState,
    pf_index,
    update_fairness,
)
from strategy.selection import Candidate, CandidateSet, as_candidate_set
from utils.rng import CHANNEL_STREAM, make_rng

logger = logging.getLogger(__name__)

DEFAULT_SAMPLE_EVERY = 100
# Channel matrices drawn per batch
_SAMPLE_CHUNK = 10000


class PolicyType(Enum):
    """Per-frame scheduling policy"""
    MAX_WEIGHT = "maxweight"
    PROPORTIONAL_FAIR = "pf"


class InfeasibleTargetError(ValueError):
    """Throughput target rejected by admission control before scheduling"""

    def __init__(self, target: RateVector, hull: HullFeasibility):
        self.target = target
        self.hull = hull
        super().__init__(f"Target {target} is outside the candidate rate region: {hull}")


@dataclass(frozen=True)
class PolicySpec:
    """Policy and its parameters"""
    policy: PolicyType
    target: Optional[RateVector] = None
    ewma_weight: float = DEFAULT_EWMA_WEIGHT
    floor: float = DEFAULT_FLOOR

    def __post_init__(self):
        if self.policy is PolicyType.MAX_WEIGHT and self.target is None:
            raise ValueError("Max-weight policy needs a throughput target")

    @classmethod
    def maxweight(cls, target: RateVector) -> 'PolicySpec':
        return cls(PolicyType.MAX_WEIGHT, target)

    @classmethod
    def proportional_fair(cls,
                          ewma_weight: float = DEFAULT_EWMA_WEIGHT,
                          floor: float = DEFAULT_FLOOR) -> 'PolicySpec':
        return cls(PolicyType.PROPORTIONAL_FAIR, None, ewma_weight, floor)


@dataclass
class PolicyRunResult(SimulationResult):
    """SimulationResult plus scheduler-specific traces"""
    backlog_trajectory: Optional[pd.DataFrame] = None
    schedule_usage: Dict[str, int] = field(default_factory=dict)
    final_state: Optional[object] = None

    def to_dict(self) -> dict:
        data = super().to_dict()
        data['schedule_usage'] = dict(self.schedule_usage)
        if isinstance(self.final_state, VirtualQueueState):
            data['final_backlog'] = self.final_state.backlog.tolist()
        elif isinstance(self.final_state, FairnessState):
            data['final_average'] = self.final_state.avg_throughput.tolist()
        return data


def _trajectory_frame(rows, n_users: int) -> pd.DataFrame:
    columns = ['frame_index'] + [f'user_{i + 1}' for i in range(n_users)]
    return pd.DataFrame(rows, columns=columns)


def admission_gate(target: RateVector,
                   candidates: CandidateSet,
                   channel: ChannelParams,
                   frame: FrameConfig) -> HullFeasibility:
    """
    Hull feasibility of the target against the candidate rates

    Raises:
        InfeasibleTargetError: target outside the hull
    """
    corners = tuple(CornerPoint(s, r) for s, r in candidates.pairs())
    region = RateRegion(corners, channel, frame)
    hull = hull_feasible(target, region)
    if not hull.feasible:
        raise InfeasibleTargetError(target, hull)
    logger.info(f"Admission gate passed for target {target}")
    return hull


def run_policy(spec: PolicySpec,
               channel: ChannelParams,
               frame: FrameConfig,
               candidates: Union[Sequence[Candidate], CandidateSet, None] = None,
               n_frames: int = 100000,
               seed: int = 0,
               generator: Optional[GreedyCandidateGenerator] = None,
               sample_every: int = DEFAULT_SAMPLE_EVERY,
               stream: Sequence[int] = (CHANNEL_STREAM,)) -> PolicyRunResult:
    """
    Run a scheduling policy for n_frames frames

    Args:
        spec: Policy and parameters
        channel: ON probabilities
        frame: Frame length
        candidates: Static candidate schedules with their expected rates
        n_frames: Frames to simulate
        seed: Run seed; identical seeds reproduce bit-identical results
        generator: Dynamic candidate source used instead of static candidates
        sample_every: Trajectory sampling period in frames
        stream: Channel sub-stream of the seed

    Returns:
        PolicyRunResult

    Raises:
        InfeasibleTargetError: max-weight target outside the candidate region
        ValueError: n_frames < 1 or no candidate source
    """
    if n_frames < 1:
        raise ValueError(f"n_frames must be >= 1, got {n_frames}")
    if (candidates is None) == (generator is None):
        raise ValueError("Pass exactly one of candidates or generator")
    if sample_every < 1:
        raise ValueError(f"sample_every must be >= 1, got {sample_every}")

    n_users = channel.n_users
    static = as_candidate_set(candidates) if candidates is not None else None
    if static is not None and static.n_users != n_users:
        raise ValueError(f"Candidates cover {static.n_users} users, channel has N={n_users}")

    if spec.policy is PolicyType.MAX_WEIGHT:
        if len(spec.target) != n_users:
            raise ValueError(f"Target has {len(spec.target)} entries, channel has N={n_users}")
        gate_set = static if static is not None else generator.candidates(spec.target.as_array(), 0)
        admission_gate(spec.target, gate_set, channel, frame)
        state = VirtualQueueState.empty(spec.target)
    else:
        state = FairnessState.initial(n_users, spec.ewma_weight, spec.floor)

    logger.info(f"Running {spec.policy.value} for {n_frames} frames (N={n_users}, tau={frame.tau}, "
                f"seed={seed})")

    rng = make_rng(seed, *stream)
    counts = np.zeros(n_users, dtype=np.int64)
    usage: Counter = Counter()
    trajectory, backlog_rows = [], []

    batch = None
    for f in range(n_frames):
        if f % _SAMPLE_CHUNK == 0:
            batch = sample_channel_batch(channel, frame, min(_SAMPLE_CHUNK, n_frames - f), rng)

        if spec.policy is PolicyType.MAX_WEIGHT:
            weights = state.backlog
        else:
            weights = state.gradient
        current = static if static is not None else generator.candidates(weights, f)

        if spec.policy is PolicyType.MAX_WEIGHT:
            index = maxweight_index(state, current)
        else:
            index = pf_index(state, current)
        schedule = current.schedules[index]
        usage[current.labels[index]] += 1

        trace = execute_frame(schedule, ChannelMatrix(batch[f % _SAMPLE_CHUNK]))
        delivered = trace.delivered
        counts += delivered

        if spec.policy is PolicyType.MAX_WEIGHT:
            state = update_virtual_queues(state, delivered)
        else:
            state = update_fairness(state, delivered)

        done = f + 1
        if done % sample_every == 0 or done == n_frames:
            trajectory.append([done] + list(counts / done))
            if spec.policy is PolicyType.MAX_WEIGHT:
                backlog_rows.append([done] + list(state.backlog))

    result = PolicyRunResult.from_counts(
        counts, n_frames,
        trajectory=_trajectory_frame(trajectory, n_users),
        label=spec.policy.value,
        backlog_trajectory=_trajectory_frame(backlog_rows, n_users) if backlog_rows else None,
        schedule_usage=dict(sorted(usage.items())),
        final_state=state,
    )
    logger.info(f"Policy run finished: {result}")
    return result
