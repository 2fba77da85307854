"""
Frame Execution Engine
Deterministic execution of a schedule against a realised channel

Flow (per slot):
1. Active group's addressed set A = group minus members that already succeeded
2. Exactly one ON member of A => Success, none => Idle, two or more => Collision
3. Group finished when all members succeeded => next group starts
4. After the last group the remaining slots are Idle
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from core.model import (
    COLLISION,
    IDLE,
    ChannelParams,
    FrameConfig,
    Schedule,
    SlotOutcome,
    require_valid,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChannelMatrix:
    """One frame of channel states: on[i, t] is True iff user i is ON in slot t"""
    on: np.ndarray

    def __post_init__(self):
        matrix = np.asarray(self.on, dtype=bool)
        if matrix.ndim != 2:
            raise ValueError(f"ChannelMatrix must be 2-D (users x slots), got shape {matrix.shape}")
        matrix = matrix.copy()
        matrix.setflags(write=False)
        object.__setattr__(self, 'on', matrix)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> 'ChannelMatrix':
        return cls(np.asarray(rows, dtype=bool))

    @property
    def n_users(self) -> int:
        return self.on.shape[0]

    @property
    def slots(self) -> int:
        return self.on.shape[1]


@dataclass(frozen=True)
class FrameTrace:
    """Slot-by-slot outcomes and per-user delivery indicators of one frame"""
    outcomes: Tuple[SlotOutcome, ...]
    success: Tuple[bool, ...]

    @property
    def delivered(self) -> np.ndarray:
        return np.asarray(self.success, dtype=int)

    @property
    def n_delivered(self) -> int:
        return int(sum(self.success))

    def __str__(self):
        slots = ", ".join(str(o) for o in self.outcomes)
        flags = "".join("1" if s else "0" for s in self.success)
        return f"FrameTrace([{slots}], success={flags})"


def _check_dimensions(schedule: Schedule, matrix: ChannelMatrix, frame: Optional[FrameConfig]):
    if frame is not None and frame.slots_per_frame != matrix.slots:
        raise ValueError(f"Dimension mismatch: frame has {frame.slots_per_frame} slots, "
                         f"channel matrix has {matrix.slots}")
    require_valid(schedule, ChannelParams((0.0,) * matrix.n_users))


def execute_frame(schedule: Schedule,
                  matrix: ChannelMatrix,
                  frame: Optional[FrameConfig] = None) -> FrameTrace:
    """
    Walk the frame slot by slot under the schedule execution contract

    Args:
        schedule: Schedule to serve
        matrix: Realised ON/OFF states for this frame
        frame: Optional frame config, checked against the matrix width

    Returns:
        FrameTrace
    """
    _check_dimensions(schedule, matrix, frame)

    on = matrix.on
    success = [False] * matrix.n_users
    outcomes = []

    groups = schedule.groups
    g = 0
    addressed = list(groups[0].sorted_members) if groups else []

    for t in range(matrix.slots):
        if not addressed:
            outcomes.append(IDLE)
            continue

        responders = [u for u in addressed if on[u, t]]
        if not responders:
            outcomes.append(IDLE)
        elif len(responders) > 1:
            outcomes.append(COLLISION)
        else:
            user = responders[0]
            outcomes.append(SlotOutcome.success(user))
            success[user] = True
            addressed.remove(user)
            if not addressed:
                g += 1
                addressed = list(groups[g].sorted_members) if g < len(groups) else []

    return FrameTrace(tuple(outcomes), tuple(success))


def execute_frames_batch(schedule: Schedule, on: np.ndarray) -> np.ndarray:
    """
    Vectorised execution of many frames at once

    Args:
        schedule: Schedule to serve in every frame
        on: Boolean array of shape (frames, users, slots)

    Returns:
        Boolean array (frames, users), True where the user delivered its packet
    """
    on = np.asarray(on, dtype=bool)
    if on.ndim != 3:
        raise ValueError(f"Expected (frames, users, slots) array, got shape {on.shape}")
    n_frames, n_users, n_slots = on.shape
    require_valid(schedule, ChannelParams((0.0,) * n_users))

    success = np.zeros((n_frames, n_users), dtype=bool)
    if not schedule.groups or n_frames == 0:
        return success

    # Row g is the member mask of group g; the extra last row means "schedule finished"
    group_masks = np.zeros((len(schedule.groups) + 1, n_users), dtype=bool)
    for g, group in enumerate(schedule.groups):
        group_masks[g, list(group.members)] = True

    stage = np.zeros(n_frames, dtype=int)
    addressed = np.repeat(group_masks[:1], n_frames, axis=0)
    rows = np.arange(n_frames)

    for t in range(n_slots):
        hits = addressed & on[:, :, t]
        winners = hits.sum(axis=1) == 1
        if not winners.any():
            continue

        frames = rows[winners]
        users = hits[winners].argmax(axis=1)
        success[frames, users] = True
        addressed[frames, users] = False

        finished = frames[~addressed[frames].any(axis=1)]
        if finished.size:
            stage[finished] += 1
            addressed[finished] = group_masks[stage[finished]]

    return success
