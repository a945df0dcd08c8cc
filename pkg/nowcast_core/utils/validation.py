"""
Validation utilities for nowcast-core.

Provides argument validation helpers shared by the numerical modules.
"""

import math
from typing import Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from nowcast_core.utils.exceptions import DataValueError, ParameterError, ShapeError


def validate_range(
    value: float,
    min_value: Optional[float] = None,
    max_value: Optional[float] = None,
    field_name: str = "value",
) -> float:
    """
    Validate numeric value is within range.

    Args:
        value: Value to validate
        min_value: Minimum allowed value
        max_value: Maximum allowed value
        field_name: Field name for error messages

    Returns:
        Validated value

    Raises:
        ParameterError: If value is out of range

    Example:
        >>> validate_range(0.5, 0.0, 1.0, "alpha")
        0.5
    """
    if min_value is not None and value < min_value:
        raise ParameterError(
            f"{field_name} below minimum",
            details={"value": value, "min": min_value},
        )

    if max_value is not None and value > max_value:
        raise ParameterError(
            f"{field_name} above maximum",
            details={"value": value, "max": max_value},
        )

    return value


def validate_interval(
    interval: Tuple[int, int],
    field_name: str = "interval",
    minimum: Optional[int] = None,
) -> Tuple[int, int]:
    """
    Validate that ``interval`` is a ``(lo, hi)`` pair with ``lo <= hi``.

    Raises:
        ParameterError: If the interval is empty or starts below ``minimum``
    """
    lo, hi = interval
    if lo > hi:
        raise ParameterError(
            f"{field_name} is empty",
            details={"lo": lo, "hi": hi},
        )
    if minimum is not None and lo < minimum:
        raise ParameterError(
            f"{field_name} starts below {minimum}",
            details={"lo": lo, "hi": hi},
        )
    return lo, hi


def validate_finite(value: float, field_name: str = "value") -> float:
    """
    Reject NaN and infinite values.

    Raises:
        DataValueError: If value is not finite
    """
    if not math.isfinite(value):
        raise DataValueError(f"{field_name} must be finite", details={"value": value})
    return value


def as_vector(
    values: Sequence[float],
    length: Optional[int] = None,
    field_name: str = "values",
) -> npt.NDArray[np.float64]:
    """
    Convert a sequence to a 1-D float array, optionally checking its length.

    Raises:
        ShapeError: If the array is not 1-D or has the wrong length
        DataValueError: If any entry is NaN
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ShapeError(f"{field_name} must be one-dimensional", details={"shape": arr.shape})
    if length is not None and arr.shape[0] != length:
        raise ShapeError(
            f"{field_name} has wrong length",
            details={"expected": length, "actual": int(arr.shape[0])},
        )
    if np.isnan(arr).any():
        raise DataValueError(f"{field_name} contains NaN")
    return arr
