"""
Idle Slot Module
Expected idle slots of a polled user set and the per-subset workload bound

Includes:
- E[I_S] = E[(tau - sum of geometric service times)^+] by truncated convolution
- WorkloadCondition: sum_{i in S} d_i / (p_i tau) <= 1 - E[I_S] / tau
- All 2^N - 1 subset conditions for a target vector
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Sequence

import numpy as np

from core.model import ChannelParams, FrameConfig, RateVector

logger = logging.getLogger(__name__)

# Admission and workload checks accept violations up to this slack
WORKLOAD_TOLERANCE = 1e-9


def _geometric_pmf(p: float, tau: int) -> np.ndarray:
    """pmf of slots-until-success on support 0..tau (mass past tau dropped)"""
    pmf = np.zeros(tau + 1)
    if p <= 0.0:
        return pmf
    k = np.arange(1, tau + 1)
    pmf[1:] = (1.0 - p) ** (k - 1) * p
    return pmf


def service_time_pmf(subset: Iterable[int], channel: ChannelParams, frame: FrameConfig) -> np.ndarray:
    """Distribution of the total polling time of `subset`, truncated to 0..tau"""
    tau = frame.slots_per_frame
    pmf = np.zeros(tau + 1)
    pmf[0] = 1.0
    for user in sorted(set(subset)):
        if not 0 <= user < channel.n_users:
            raise ValueError(f"User {user + 1} is out of range for N={channel.n_users}")
        pmf = np.convolve(pmf, _geometric_pmf(channel.on_prob[user], tau))[:tau + 1]
    return pmf


def expected_idle_slots(subset: Iterable[int], channel: ChannelParams, frame: FrameConfig) -> float:
    """
    Expected slots left idle after every user of `subset` got its packet through

    Order-independent: the sum of the service times is exchangeable. A user
    with p=0 never completes, so nothing after its turn is idle.

    Example:
        >>> expected_idle_slots({0}, ChannelParams((0.3,)), FrameConfig(4))  # 1.467
    """
    tau = frame.slots_per_frame
    pmf = service_time_pmf(subset, channel, frame)
    idle = np.arange(tau, -1, -1, dtype=float)
    return float(idle @ pmf)


@dataclass(frozen=True)
class WorkloadCondition:
    """Necessary condition for a subset S: load <= slack_bound"""
    subset: FrozenSet[int]
    load: float
    slack_bound: float

    @property
    def margin(self) -> float:
        """Positive when the condition holds with room to spare"""
        return self.slack_bound - self.load

    def holds(self, tolerance: float = WORKLOAD_TOLERANCE) -> bool:
        return self.load <= self.slack_bound + tolerance

    def label(self) -> str:
        return "{" + ",".join(str(u + 1) for u in sorted(self.subset)) + "}"

    def __str__(self):
        status = "ok" if self.holds() else "VIOLATED"
        return f"S={self.label()}: load={self.load:.6f} <= bound={self.slack_bound:.6f} [{status}]"


def _check_target(d: RateVector, channel: ChannelParams):
    if len(d) != channel.n_users:
        raise ValueError(f"Dimension mismatch: target has {len(d)} entries, channel has N={channel.n_users}")


def workload_condition(subset: Iterable[int],
                       d: RateVector,
                       channel: ChannelParams,
                       frame: FrameConfig) -> WorkloadCondition:
    """
    Build the workload condition of one subset

    load = sum_{i in S} d_i / (p_i tau); a user with p_i = 0 and d_i > 0 makes
    the load infinite. slack_bound = 1 - E[I_S] / tau.
    """
    _check_target(d, channel)
    members = frozenset(subset)
    tau = frame.slots_per_frame

    terms = []
    for i in sorted(members):
        if d[i] == 0.0:
            continue
        p = channel.on_prob[i]
        terms.append(math.inf if p == 0.0 else d[i] / (p * tau))
    load = math.fsum(terms) if all(math.isfinite(t) for t in terms) else math.inf

    slack_bound = 1.0 - expected_idle_slots(members, channel, frame) / tau
    return WorkloadCondition(members, load, slack_bound)


def all_workload_conditions(d: RateVector,
                            channel: ChannelParams,
                            frame: FrameConfig) -> List[WorkloadCondition]:
    """Every nonempty subset's condition, by subset size then members"""
    _check_target(d, channel)
    users: Sequence[int] = range(channel.n_users)
    return [workload_condition(combo, d, channel, frame)
            for size in range(1, channel.n_users + 1)
            for combo in itertools.combinations(users, size)]
