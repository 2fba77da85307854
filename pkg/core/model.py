"""
Channel & Schedule Model
Domain types shared by every module plus the single-slot contention law

Includes:
- ChannelParams / FrameConfig (ON probabilities, slots per frame)
- ContentionGroup / Schedule (ordered disjoint groups, canonical text form)
- SlotOutcome / RateVector
- slot_outcome_distribution (exactly one ON => success, none => idle, else collision)
- validate_schedule
"""

import math
import re
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

# Rates coming out of floating point sums may overshoot [0, 1] by a few ulps
RATE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ChannelParams:
    """Per-user ON probabilities of the ON/OFF channel"""
    on_prob: Tuple[float, ...]
    n_users: Optional[int] = None

    def __post_init__(self):
        probs = tuple(float(p) for p in self.on_prob)
        object.__setattr__(self, 'on_prob', probs)

        if self.n_users is None:
            object.__setattr__(self, 'n_users', len(probs))

        if self.n_users < 1:
            raise ValueError("ChannelParams needs at least one user")
        if len(probs) != self.n_users:
            raise ValueError(f"on_prob has {len(probs)} entries but n_users={self.n_users}")
        for i, p in enumerate(probs):
            if not (0.0 <= p <= 1.0) or math.isnan(p):
                raise ValueError(f"ON probability of user {i + 1} must be in [0, 1], got {p}")

    @property
    def p(self) -> np.ndarray:
        """ON probabilities as a numpy vector"""
        return np.asarray(self.on_prob, dtype=float)

    def permuted(self, order: Sequence[int]) -> 'ChannelParams':
        """Channel with users relabelled so that new user k is old user order[k]"""
        return ChannelParams(tuple(self.on_prob[i] for i in order))

    def __str__(self):
        probs = ", ".join(f"{p:.4g}" for p in self.on_prob)
        return f"ChannelParams(N={self.n_users}, p=({probs}))"


@dataclass(frozen=True)
class FrameConfig:
    """Frame of tau slots; every user's packet expires at frame end"""
    slots_per_frame: int

    def __post_init__(self):
        if int(self.slots_per_frame) != self.slots_per_frame or self.slots_per_frame < 1:
            raise ValueError(f"slots_per_frame must be a positive integer, got {self.slots_per_frame}")
        object.__setattr__(self, 'slots_per_frame', int(self.slots_per_frame))

    @property
    def tau(self) -> int:
        return self.slots_per_frame


@dataclass(frozen=True)
class ContentionGroup:
    """
    Set of users addressed by one multicast control packet

    A singleton group is plain polling of one user.
    """
    members: FrozenSet[int]

    def __post_init__(self):
        raw = list(self.members)
        if not raw:
            raise ValueError("ContentionGroup must have at least one member")
        if len(set(raw)) != len(raw):
            raise ValueError(f"ContentionGroup has duplicate members: {sorted(raw)}")
        for m in raw:
            if int(m) != m or m < 0:
                raise ValueError(f"Invalid user index in group: {m}")
        object.__setattr__(self, 'members', frozenset(int(m) for m in raw))

    @classmethod
    def of(cls, *users: int) -> 'ContentionGroup':
        return cls(list(users))

    @property
    def sorted_members(self) -> Tuple[int, ...]:
        return tuple(sorted(self.members))

    @property
    def size(self) -> int:
        return len(self.members)

    def canonical(self) -> str:
        """Text form with 1-based labels: '3' or '(1+2)'"""
        labels = [str(m + 1) for m in self.sorted_members]
        if len(labels) == 1:
            return labels[0]
        return "(" + "+".join(labels) + ")"

    def __str__(self):
        return self.canonical()


_GROUP_TOKEN = re.compile(r"^(?:[1-9][0-9]*|\((?:[1-9][0-9]*)(?:\+[1-9][0-9]*)+\))$")


@dataclass(frozen=True)
class Schedule:
    """
    Ordered list of contention groups served within one frame

    Execution contract: groups are served in order; the active group's addressed
    set starts as the whole group and loses each member that succeeds; the next
    group starts once every member succeeded; the frame ends after tau slots.
    """
    groups: Tuple[ContentionGroup, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, 'groups', tuple(self.groups))

    @classmethod
    def polling(cls, users: Iterable[int]) -> 'Schedule':
        """All-singleton schedule i1/i2/.../ik (0-based user indices)"""
        return cls(tuple(ContentionGroup(frozenset([u])) for u in users))

    @classmethod
    def from_groups(cls, groups: Iterable[Iterable[int]]) -> 'Schedule':
        return cls(tuple(ContentionGroup(list(g)) for g in groups))

    @classmethod
    def empty(cls) -> 'Schedule':
        return cls(())

    @classmethod
    def parse(cls, text: str) -> 'Schedule':
        """
        Parse the canonical text form

        Groups are separated by '/', members of a multi-user group are joined by
        '+' inside parentheses, labels are 1-based and sorted ascending. Only
        canonical strings are accepted so that parse/print round-trips exactly.
        """
        if text == "":
            return cls.empty()

        groups = []
        for token in text.split("/"):
            if not _GROUP_TOKEN.match(token):
                raise ValueError(f"Malformed schedule group '{token}' in '{text}'")
            labels = [int(x) for x in token.strip("()").split("+")]
            if labels != sorted(set(labels)):
                raise ValueError(f"Group members must be distinct and ascending: '{token}'")
            groups.append(ContentionGroup(frozenset(label - 1 for label in labels)))

        schedule = cls(tuple(groups))
        if schedule.canonical() != text:
            raise ValueError(f"Schedule text is not canonical: '{text}'")
        return schedule

    def canonical(self) -> str:
        return "/".join(g.canonical() for g in self.groups)

    @property
    def users(self) -> Tuple[int, ...]:
        """Users in service order (group members ascending)"""
        return tuple(u for g in self.groups for u in g.sorted_members)

    @property
    def n_groups(self) -> int:
        return len(self.groups)

    @property
    def max_group_size(self) -> int:
        return max((g.size for g in self.groups), default=0)

    @property
    def is_polling(self) -> bool:
        return all(g.size == 1 for g in self.groups)

    def sort_key(self) -> tuple:
        """Enumeration order: users covered, then more groups first, then member sequence"""
        return (len(self.users), -self.n_groups, tuple(g.sorted_members for g in self.groups))

    def __len__(self):
        return len(self.groups)

    def __str__(self):
        return self.canonical()


class OutcomeKind(Enum):
    """What the base station observes in a slot"""
    SUCCESS = "SUCCESS"
    IDLE = "IDLE"
    COLLISION = "COLLISION"


@dataclass(frozen=True)
class SlotOutcome:
    """Single-slot outcome; SUCCESS carries the user that got through"""
    kind: OutcomeKind
    user: Optional[int] = None

    def __post_init__(self):
        if (self.kind is OutcomeKind.SUCCESS) != (self.user is not None):
            raise ValueError("Only SUCCESS outcomes carry a user index")

    @classmethod
    def success(cls, user: int) -> 'SlotOutcome':
        return cls(OutcomeKind.SUCCESS, int(user))

    @property
    def is_success(self) -> bool:
        return self.kind is OutcomeKind.SUCCESS

    def __str__(self):
        if self.is_success:
            return f"Success({self.user + 1})"
        return self.kind.value.capitalize()


IDLE = SlotOutcome(OutcomeKind.IDLE)
COLLISION = SlotOutcome(OutcomeKind.COLLISION)


@dataclass(frozen=True)
class RateVector:
    """Expected packets delivered per user per frame (each entry in [0, 1])"""
    rates: Tuple[float, ...]

    def __post_init__(self):
        clean = []
        for i, r in enumerate(self.rates):
            r = float(r)
            if math.isnan(r) or r < -RATE_TOLERANCE or r > 1.0 + RATE_TOLERANCE:
                raise ValueError(f"Rate of user {i + 1} must be in [0, 1], got {r}")
            clean.append(min(max(r, 0.0), 1.0))
        object.__setattr__(self, 'rates', tuple(clean))

    @classmethod
    def zeros(cls, n_users: int) -> 'RateVector':
        return cls((0.0,) * n_users)

    @classmethod
    def from_array(cls, values) -> 'RateVector':
        return cls(tuple(float(v) for v in np.asarray(values, dtype=float).ravel()))

    @property
    def n_users(self) -> int:
        return len(self.rates)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.rates, dtype=float)

    def per_slot(self, frame: FrameConfig) -> np.ndarray:
        """Throughput in packets per slot"""
        return self.as_array() / frame.slots_per_frame

    def __getitem__(self, i: int) -> float:
        return self.rates[i]

    def __len__(self):
        return len(self.rates)

    def __str__(self):
        return "(" + ", ".join(f"{r:.4f}" for r in self.rates) + ")"


@dataclass(frozen=True)
class ScheduleValidation:
    """Result of validate_schedule: ok, or the first violation found"""
    ok: bool
    violation: Optional[str] = None

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "ok" if self.ok else f"violation: {self.violation}"


def validate_schedule(schedule: Schedule, channel: ChannelParams) -> ScheduleValidation:
    """
    Check index validity and pairwise disjointness of the groups

    Returns the first violation in service order instead of raising.
    """
    seen = set()
    for position, group in enumerate(schedule.groups):
        for user in group.sorted_members:
            if user >= channel.n_users:
                return ScheduleValidation(
                    False,
                    f"user {user + 1} in group {position + 1} is out of range for N={channel.n_users}")
            if user in seen:
                return ScheduleValidation(False, f"duplicate user {user + 1} in group {position + 1}")
            seen.add(user)
    return ScheduleValidation(True)


def require_valid(schedule: Schedule, channel: ChannelParams):
    """Raise ValueError when the schedule is not valid for the channel"""
    result = validate_schedule(schedule, channel)
    if not result:
        raise ValueError(f"Invalid schedule '{schedule}': {result.violation}")


def slot_outcome_distribution(addressed: ContentionGroup,
                              channel: ChannelParams) -> Dict[SlotOutcome, float]:
    """
    Outcome law of one slot for the addressed set A

    P(Success(j)) = p_j * prod_{i in A, i != j} (1 - p_i)
    P(Idle)       = prod_{i in A} (1 - p_i)
    P(Collision)  = remainder
    """
    members = addressed.sorted_members
    for m in members:
        if m >= channel.n_users:
            raise ValueError(f"User {m + 1} is out of range for N={channel.n_users}")

    probs = [channel.on_prob[m] for m in members]
    off = [1.0 - p for p in probs]

    distribution: Dict[SlotOutcome, float] = {}
    total = 0.0
    for k, m in enumerate(members):
        value = probs[k] * math.prod(off[:k] + off[k + 1:])
        distribution[SlotOutcome.success(m)] = value
        total += value

    idle = math.prod(off)
    distribution[IDLE] = idle
    distribution[COLLISION] = max(0.0, 1.0 - total - idle) if len(members) > 1 else 0.0
    return distribution


def success_probabilities(addressed: Sequence[int], on_prob: Sequence[float]) -> List[float]:
    """Per-member single-slot success probability for an addressed set"""
    off = [1.0 - on_prob[m] for m in addressed]
    return [on_prob[m] * math.prod(off[:k] + off[k + 1:]) for k, m in enumerate(addressed)]
