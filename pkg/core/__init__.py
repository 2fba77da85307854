"""Core channel, schedule and frame-execution model"""

from .model import (
    ChannelParams,
    FrameConfig,
    ContentionGroup,
    Schedule,
    OutcomeKind,
    SlotOutcome,
    RateVector,
    ScheduleValidation,
    IDLE,
    COLLISION,
    slot_outcome_distribution,
    validate_schedule,
)
from .frame_engine import ChannelMatrix, FrameTrace, execute_frame, execute_frames_batch
from .enumeration import (
    EnumerationCapError,
    enumerate_polling_schedules,
    enumerate_group_schedules,
    enumerate_schedules,
    polling_schedule_count,
    group_schedule_count,
    ordered_partition_count,
    polling_face_count,
)

__all__ = [
    # Model
    'ChannelParams',
    'FrameConfig',
    'ContentionGroup',
    'Schedule',
    'OutcomeKind',
    'SlotOutcome',
    'RateVector',
    'ScheduleValidation',
    'IDLE',
    'COLLISION',
    'slot_outcome_distribution',
    'validate_schedule',
    # Frame execution
    'ChannelMatrix',
    'FrameTrace',
    'execute_frame',
    'execute_frames_batch',
    # Enumeration
    'EnumerationCapError',
    'enumerate_polling_schedules',
    'enumerate_group_schedules',
    'enumerate_schedules',
    'polling_schedule_count',
    'group_schedule_count',
    'ordered_partition_count',
    'polling_face_count',
]
