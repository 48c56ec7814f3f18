"""JSON helpers: numpy-aware conversion and full-precision formatting."""

from __future__ import annotations

import json
from enum import Enum

import numpy as np


def jsonable(obj):
    """Recursively convert numpy scalars/arrays and enums to JSON values."""
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (np.bool_, bool)):  # before int: bool subclasses int
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


def dumps(obj) -> str:
    # json repr of floats round-trips full double precision
    return json.dumps(jsonable(obj), indent=2)


def fmt(x: float) -> str:
    """Format a float for CSV with round-trip precision."""
    return format(float(x), ".17g")
