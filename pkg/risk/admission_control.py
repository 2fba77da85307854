"""
Admission Control Module
Accept or reject a throughput target before any scheduling happens

Includes:
- Polling admission: N nested workload conditions (non-negativity is enforced by RateVector)
- Exhaustive mode checking all 2^N - 1 subset conditions
- Extended-model admission through hull feasibility against a rate region
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import List, Optional

from core.model import ChannelParams, FrameConfig, RateVector
from models.idle_slots import WORKLOAD_TOLERANCE, WorkloadCondition, workload_condition
from models.rate_region import HullFeasibility, RateRegion, hull_feasible

logger = logging.getLogger(__name__)

# 2^N subset conditions
EXHAUSTIVE_USER_CAP = 20


@dataclass
class AdmissionDecision:
    """Outcome of an admission check"""
    accepted: bool
    method: str
    checked: List[WorkloadCondition] = field(default_factory=list)
    binding: Optional[WorkloadCondition] = None
    hull: Optional[HullFeasibility] = None

    @property
    def n_checks(self) -> int:
        # Plus the non-negativity check RateVector performs on construction
        return len(self.checked) + 1

    def report(self) -> str:
        lines = [f"Admission ({self.method}): {'ACCEPT' if self.accepted else 'REJECT'}"]
        for condition in self.checked:
            lines.append(f"  {condition}")
        if self.binding is not None:
            lines.append(f"  binding: S={self.binding.label()} (margin {self.binding.margin:+.6f})")
        if self.hull is not None:
            lines.append(f"  {self.hull}")
        return "\n".join(lines)

    def __str__(self):
        status = "ACCEPT" if self.accepted else "REJECT"
        if self.binding is not None and not self.accepted:
            return f"{status} ({self.method}, binding S={self.binding.label()})"
        return f"{status} ({self.method})"


def _nested_subsets(d: RateVector) -> List[frozenset]:
    # Ascending d, ties by index; suffixes starting from the full set
    order = sorted(range(len(d)), key=lambda i: (d[i], i))
    return [frozenset(order[k:]) for k in range(len(order))]


def polling_admission(d: RateVector,
                      channel: ChannelParams,
                      frame: FrameConfig,
                      exhaustive: bool = False,
                      tolerance: float = WORKLOAD_TOLERANCE) -> AdmissionDecision:
    """
    Polling-model admission test

    Workload conditions of the suffix sets of the ascending-d order. Together
    with the non-negativity check done by RateVector these are N + 1 checks. The first violated condition is
    reported as binding. With exhaustive=True every nonempty subset is checked.

    Raises:
        ValueError: target length differs from the channel's N
    """
    if len(d) != channel.n_users:
        raise ValueError(f"Dimension mismatch: target has {len(d)} entries, channel has N={channel.n_users}")

    method = "polling-exhaustive" if exhaustive else "polling"

    if exhaustive:
        if channel.n_users > EXHAUSTIVE_USER_CAP:
            raise ValueError(f"Exhaustive admission limited to N <= {EXHAUSTIVE_USER_CAP}")
        subsets = [frozenset(c)
                   for size in range(channel.n_users, 0, -1)
                   for c in itertools.combinations(range(channel.n_users), size)]
    else:
        subsets = _nested_subsets(d)

    checked = []
    for subset in subsets:
        condition = workload_condition(subset, d, channel, frame)
        checked.append(condition)
        if not condition.holds(tolerance):
            logger.debug(f"Admission rejected on {condition}")
            return AdmissionDecision(False, method, checked, binding=condition)

    return AdmissionDecision(True, method, checked)


class AdmissionController:
    """
    Admission gate for either contention model

    Example:
        >>> controller = AdmissionController(channel, frame, model='extended', region=region)
        >>> decision = controller.check(RateVector((0.6, 0.5)))
        >>> print(decision.report())
    """

    def __init__(self,
                 channel: ChannelParams,
                 frame: FrameConfig,
                 model: str = 'polling',
                 region: Optional[RateRegion] = None,
                 exhaustive: bool = False):
        """
        Args:
            channel: ON probabilities
            frame: Frame length
            model: 'polling' (workload conditions) or 'extended' (hull LP)
            region: Rate region, required for the extended model
            exhaustive: Check all subset conditions in the polling model
        """
        if model not in ('polling', 'extended'):
            raise ValueError(f"Unknown contention model: {model}")
        if model == 'extended' and region is None:
            raise ValueError("Extended-model admission needs a rate region")

        self.channel = channel
        self.frame = frame
        self.model = model
        self.region = region
        self.exhaustive = exhaustive

        logger.info(f"AdmissionController initialized (model={model}, N={channel.n_users}, "
                    f"tau={frame.tau})")

    def check(self, d: RateVector) -> AdmissionDecision:
        if self.model == 'polling':
            decision = polling_admission(d, self.channel, self.frame, exhaustive=self.exhaustive)
        else:
            hull = hull_feasible(d, self.region)
            decision = AdmissionDecision(hull.feasible, "hull", hull=hull)

        logger.info(f"Admission of {d}: {decision}")
        return decision
