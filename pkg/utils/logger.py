"""
Logging utilities
"""

import copy
import logging
import logging.config
from pathlib import Path
from typing import Optional, Union

from config import DEFAULT_LOG_DIR, LOG_FILE_NAME, LOGGING_CONFIG


def setup_logging(level: str = "INFO", log_dir: Optional[Union[str, Path]] = None):
    """
    Setup logging configuration

    Args:
        level: Console level
        log_dir: Directory of the rotating run log (default: <project>/logs)
    """
    config = copy.deepcopy(LOGGING_CONFIG)
    directory = Path(log_dir) if log_dir else DEFAULT_LOG_DIR
    directory.mkdir(parents=True, exist_ok=True)

    config['handlers']['console']['level'] = level.upper()
    config['handlers']['file']['filename'] = str(directory / LOG_FILE_NAME)
    logging.config.dictConfig(config)

    logger = logging.getLogger(__name__)
    logger.debug(f"Logging system initialized (console={level.upper()}, file={directory / LOG_FILE_NAME})")


def get_logger(name: str) -> logging.Logger:
    """Get logger instance"""
    return logging.getLogger(name)
