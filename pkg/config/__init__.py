"""
Configuration package
Experiment configuration models, defaults, layered loading and logging setup
"""

__version__ = "1.0.0"

from pathlib import Path

# Project paths
BASE_DIR = Path(__file__).resolve().parent.parent
DEFAULT_LOG_DIR = BASE_DIR / "logs"

LOG_FILE_NAME = "rate_region.log"

# Logging
LOGGING_CONFIG = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'detailed': {
            'format': '%(asctime)s [%(levelname)s] %(name)s: %(message)s',
            'datefmt': '%Y-%m-%d %H:%M:%S'
        },
        'colored': {
            '()': 'colorlog.ColoredFormatter',
            'format': '%(log_color)s[%(levelname)s]%(reset)s %(message)s',
            'log_colors': {
                'DEBUG': 'cyan',
                'INFO': 'green',
                'WARNING': 'yellow',
                'ERROR': 'red',
                'CRITICAL': 'red,bg_white',
            },
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'level': 'INFO',
            'formatter': 'colored',
            'stream': 'ext://sys.stderr'
        },
        'file': {
            'class': 'logging.handlers.RotatingFileHandler',
            'encoding': 'utf-8',
            'level': 'DEBUG',
            'formatter': 'detailed',
            'filename': str(DEFAULT_LOG_DIR / LOG_FILE_NAME),
            'maxBytes': 10485760,  # 10MB
            'backupCount': 5
        },
    },
    'loggers': {
        '': {  # Root logger
            'level': 'DEBUG',
            'handlers': ['console', 'file']
        }
    }
}

from .models import (  # noqa: E402
    CellularParameters,
    ChannelSettings,
    ConfigError,
    ExperimentConfig,
    FrameSettings,
    OutputSettings,
    PolicyParameters,
    ScheduleCaps,
    SimulationParameters,
)
from .defaults import get_default_experiment_config  # noqa: E402
from .manager import ConfigManager, load_experiment_config  # noqa: E402

__all__ = [
    'BASE_DIR',
    'DEFAULT_LOG_DIR',
    'LOGGING_CONFIG',
    'CellularParameters',
    'ChannelSettings',
    'ConfigError',
    'ExperimentConfig',
    'FrameSettings',
    'OutputSettings',
    'PolicyParameters',
    'ScheduleCaps',
    'SimulationParameters',
    'get_default_experiment_config',
    'ConfigManager',
    'load_experiment_config',
]
