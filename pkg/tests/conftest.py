"""
Shared fixtures: the two-user channel p = (0.3, 0.2) with 4-slot frames
"""

import sys
from pathlib import Path

project_root = Path(__file__).resolve().parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

import pytest  # noqa: E402

from core.enumeration import enumerate_group_schedules, enumerate_polling_schedules  # noqa: E402
from core.model import ChannelParams, FrameConfig  # noqa: E402
from models.rate_region import build_rate_region  # noqa: E402


@pytest.fixture
def channel():
    return ChannelParams((0.3, 0.2))


@pytest.fixture
def frame():
    return FrameConfig(4)


@pytest.fixture
def polling_region(channel, frame):
    return build_rate_region(enumerate_polling_schedules(2, 2), channel, frame)


@pytest.fixture
def extended_region(channel, frame):
    return build_rate_region(enumerate_group_schedules(2, 2), channel, frame)
