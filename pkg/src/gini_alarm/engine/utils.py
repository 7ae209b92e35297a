"""Utility functions for rendering engine results."""

import dataclasses
import json
import math
from typing import Any, Optional

import numpy as np

from ..config import get_settings


def to_payload(obj: Any, decimals: Optional[int] = None) -> Any:
    """Convert results into JSON-ready values.

    Dataclasses become dicts in field order, tuples and arrays become lists,
    floats are rounded to ``decimals`` places and non-finite floats become
    the strings "inf", "-inf" or "nan".

    Args:
        obj: Dataclass, mapping, sequence or scalar.
        decimals: Rounding precision for floats; defaults to the
            ``decimals`` setting (GINI_ALARM_DECIMALS, 6 unless overridden).

    Returns:
        Plain dicts, lists, strings, ints, floats, bools and None.
    """
    if decimals is None:
        decimals = get_settings().decimals
    return _rounded(obj, decimals)


def _rounded(obj: Any, decimals: int) -> Any:
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            f.name: _rounded(getattr(obj, f.name), decimals)
            for f in dataclasses.fields(obj)
        }
    if isinstance(obj, dict):
        return {str(k): _rounded(v, decimals) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v, decimals) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_rounded(v, decimals) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not math.isfinite(value):
            return str(value)
        # 0.0 instead of -0.0 keeps the output stable
        return round(value, decimals) + 0.0
    return obj


def dumps(payload: Any, decimals: Optional[int] = None) -> str:
    """Deterministic JSON: insertion key order, fixed rounding, two-space indent."""
    return json.dumps(to_payload(payload, decimals), indent=2, ensure_ascii=False)


def error_payload(exc: BaseException) -> dict:
    """Failure dictionary returned by the tool layer."""
    return {
        "success": False,
        "error": str(exc),
        "error_type": type(exc).__name__,
    }


def parse_number_list(text: str) -> list[float]:
    """Parse ``"1,2,3"`` into floats; blanks are ignored."""
    values = []
    for item in text.split(","):
        item = item.strip()
        if item:
            values.append(float(item))
    return values
