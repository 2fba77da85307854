"""
Multicast Gain Module
When does serving a group in contention beat polling its members one by one

Includes:
- Single-slot multicast point of a group and its load against the polling plane
- Factor-of-N system throughput ratio for equal ON probabilities
- Pairwise combination of an all-singleton schedule into a two-user group
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

from core.model import ChannelParams, ContentionGroup, Schedule, success_probabilities

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MulticastGain:
    """
    Single-slot comparison of a contention group against polling

    point:  per-member success probability p_i * prod_{j != i} (1 - p_j)
    load:   sum_i point_i / p_i, the point substituted into the polling plane
    margin: load - 1 (>= 0 means the point lies on or beyond the polling region)
    holds:  every member has p_i <= 1/k
    """
    group: ContentionGroup
    point: Tuple[float, ...]
    load: float
    margin: float
    holds: bool
    strict: bool

    def __str__(self):
        status = "holds" if self.holds else "premise fails"
        kind = "strict" if self.strict else "boundary"
        return (f"MulticastGain({self.group}): load={self.load:.6f}, "
                f"margin={self.margin:+.6f} [{status}, {kind}]")


def multicast_gain_holds(group: ContentionGroup,
                         channel: ChannelParams,
                         tolerance: float = 1e-12) -> MulticastGain:
    """
    Check the k-user multicast gain condition

    Raises:
        ValueError: group has fewer than two members or is out of range
    """
    members = group.sorted_members
    k = len(members)
    if k < 2:
        raise ValueError(f"Multicast gain needs a group of at least 2 users, got {group}")
    if members[-1] >= channel.n_users:
        raise ValueError(f"Group {group} is out of range for N={channel.n_users}")

    probs = [channel.on_prob[m] for m in members]
    point = tuple(success_probabilities(members, channel.on_prob))
    load = math.fsum(
        math.prod(1.0 - probs[j] for j in range(k) if j != i) for i in range(k))
    margin = load - 1.0

    holds = all(p <= 1.0 / k + tolerance for p in probs)
    strict = holds and margin > tolerance
    return MulticastGain(group, point, load, margin, holds, strict)


def factor_n_gain(n: int, p: float) -> float:
    """Extended over polling system throughput for n users with equal p: n (1-p)^(n-1)"""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0, 1), got {p}")
    return n * (1.0 - p) ** (n - 1)


def combine_pair(schedule: Schedule, a: int, b: int) -> Schedule:
    """
    Replace users a and b of an all-singleton schedule by the group {a, b}

    The group takes the earlier of the two positions; the later singleton is
    removed.
    """
    if not schedule.is_polling:
        raise ValueError(f"Pair combination needs an all-singleton schedule, got '{schedule}'")
    if a == b:
        raise ValueError("Pair combination needs two distinct users")

    order = list(schedule.users)
    if a not in order or b not in order:
        raise ValueError(f"Users {a + 1} and {b + 1} must both appear in '{schedule}'")

    first, second = sorted((order.index(a), order.index(b)))
    groups = []
    for position, user in enumerate(order):
        if position == first:
            groups.append(ContentionGroup.of(a, b))
        elif position != second:
            groups.append(ContentionGroup.of(user))
    return Schedule(tuple(groups))


def pairwise_enhancements(schedule: Schedule) -> List[Tuple[Tuple[int, int], Schedule]]:
    """Every pair combination of an all-singleton schedule"""
    return [((a, b), combine_pair(schedule, a, b))
            for a, b in itertools.combinations(sorted(schedule.users), 2)]
