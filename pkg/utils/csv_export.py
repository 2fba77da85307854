"""
Table export helpers
CSV tables are written with 12 significant digits; JSON summaries are indented
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

import pandas as pd

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"


def write_table(df: pd.DataFrame, path: Union[str, Path]) -> Path:
    """Write a DataFrame as CSV, creating the parent directory"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info(f"Wrote {len(df)} rows to {path}")
    return path


def write_json(data: Dict[str, Any], path: Union[str, Path]) -> Path:
    """Dump a summary dict as indented JSON"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w') as f:
        json.dump(data, f, indent=2, default=_to_builtin)
    logger.info(f"Wrote summary to {path}")
    return path


def _to_builtin(value: Any) -> Any:
    # numpy scalars/arrays leak into summaries
    if hasattr(value, 'tolist'):
        return value.tolist()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")
