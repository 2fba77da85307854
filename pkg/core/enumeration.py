"""
Schedule Enumeration
Exhaustive lists of static schedules for rate region construction

Includes:
- Ordered polling schedules (all k-permutations of users, k = 0..max_len)
- Static group schedules (ordered lists of disjoint groups with a size cap)
- Census counts used to cross-check the enumerations
"""

import itertools
import logging
import math
from functools import lru_cache
from typing import FrozenSet, Iterator, List, Optional, Tuple

from core.model import ContentionGroup, Schedule

logger = logging.getLogger(__name__)

# Exhaustive enumeration grows super-exponentially past these user counts
DEFAULT_POLLING_USER_CAP = 8
DEFAULT_GROUP_USER_CAP = 6


class EnumerationCapError(ValueError):
    """Raised when an exhaustive enumeration would exceed its user cap"""

    def __init__(self, kind: str, n: int, cap: int):
        self.kind = kind
        self.n = n
        self.cap = cap
        super().__init__(f"{kind} enumeration cap exceeded: n={n} > cap {cap} "
                         f"(pass allow_large=True / --allow-large to override)")


def polling_schedule_count(n: int, max_len: int) -> int:
    """sum_{k=0}^{max_len} P(n, k)"""
    return sum(math.perm(n, k) for k in range(max_len + 1))


@lru_cache(maxsize=None)
def ordered_partition_count(m: int, cap: int) -> int:
    """Ordered set partitions of m labelled users into blocks of size <= cap"""
    if m == 0:
        return 1
    return sum(math.comb(m, j) * ordered_partition_count(m - j, cap)
               for j in range(1, min(m, cap) + 1))


def group_schedule_count(n: int, cap: int) -> int:
    """sum_m C(n, m) * (ordered set partitions of m with block size <= cap)"""
    return sum(math.comb(n, m) * ordered_partition_count(m, cap) for m in range(n + 1))


def polling_face_count(n: int) -> int:
    """Faces of the polling region including the non-negativity faces: n + sum_r C(n, r)"""
    return n + sum(math.comb(n, r) for r in range(1, n + 1))


def enumerate_polling_schedules(n: int,
                                max_len: int,
                                user_cap: int = DEFAULT_POLLING_USER_CAP,
                                allow_large: bool = False) -> List[Schedule]:
    """
    All ordered polling schedules i1/i2/.../ik with k <= max_len

    Order: by length, then lexicographically by user sequence.
    """
    if not 0 <= max_len <= n:
        raise ValueError(f"max_len must be in [0, {n}], got {max_len}")
    if n > user_cap and not allow_large:
        raise EnumerationCapError("polling", n, user_cap)

    schedules = [Schedule.polling(perm)
                 for k in range(max_len + 1)
                 for perm in itertools.permutations(range(n), k)]

    logger.debug(f"Enumerated {len(schedules)} polling schedules (n={n}, max_len={max_len})")
    return schedules


def _nonempty_subsets(users: Tuple[int, ...], max_size: int) -> Iterator[FrozenSet[int]]:
    for size in range(1, min(max_size, len(users)) + 1):
        for combo in itertools.combinations(users, size):
            yield frozenset(combo)


def _extend(prefix: Tuple[ContentionGroup, ...],
            remaining: Tuple[int, ...],
            max_group_size: int) -> Iterator[Tuple[ContentionGroup, ...]]:
    yield prefix
    for subset in _nonempty_subsets(remaining, max_group_size):
        rest = tuple(u for u in remaining if u not in subset)
        yield from _extend(prefix + (ContentionGroup(subset),), rest, max_group_size)


def enumerate_group_schedules(n: int,
                              max_group_size: int,
                              user_cap: int = DEFAULT_GROUP_USER_CAP,
                              allow_large: bool = False) -> List[Schedule]:
    """
    All static schedules made of pairwise-disjoint groups of size <= max_group_size

    With max_group_size=1 the result equals enumerate_polling_schedules(n, n),
    order included.
    """
    if not 1 <= max_group_size <= n:
        raise ValueError(f"max_group_size must be in [1, {n}], got {max_group_size}")
    if n > user_cap and not allow_large:
        raise EnumerationCapError("group", n, user_cap)

    schedules = [Schedule(groups) for groups in _extend((), tuple(range(n)), max_group_size)]
    schedules.sort(key=Schedule.sort_key)

    logger.debug(f"Enumerated {len(schedules)} group schedules "
                 f"(n={n}, max_group_size={max_group_size})")
    return schedules


def enumerate_schedules(model: str,
                        n: int,
                        max_len: Optional[int] = None,
                        max_group_size: int = 2,
                        allow_large: bool = False) -> List[Schedule]:
    """Schedules of the polling or the extended (multicast) contention model"""
    if model == 'polling':
        return enumerate_polling_schedules(n, n if max_len is None else max_len,
                                           allow_large=allow_large)
    if model == 'extended':
        return enumerate_group_schedules(n, max_group_size, allow_large=allow_large)
    raise ValueError(f"Unknown contention model: {model}")
