"""Utility modules"""

from .logger import get_logger, setup_logging
from .rng import make_rng
from .csv_export import write_json, write_table

__all__ = ['get_logger', 'setup_logging', 'make_rng', 'write_json', 'write_table']
