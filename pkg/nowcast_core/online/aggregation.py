"""
Exponentially weighted aggregation of expert predictions.

Weights live on the simplex and are maintained in log space with max-shift
normalization, so ``eta * loss`` in the thousands (percent-scale squared
errors) never underflows every weight to zero.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import numpy.typing as npt

from nowcast_core.utils.exceptions import DataValueError, ParameterError, ShapeError
from nowcast_core.utils.validation import as_vector, validate_finite, validate_range


@dataclass(frozen=True)
class WeightVector:
    """
    Normalized expert weights.

    Attributes:
        w: Weights, non-negative and summing to 1
        log_w: Normalized log-weights (``log_w = log(w)`` up to rounding)
    """

    w: npt.NDArray[np.float64]
    log_w: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        self.w.flags.writeable = False
        self.log_w.flags.writeable = False

    def __len__(self) -> int:
        return int(self.w.shape[0])

    def as_tuple(self) -> tuple:
        return tuple(float(x) for x in self.w)

    def mass(self, mask: npt.NDArray[np.bool_]) -> float:
        """Total weight of the experts selected by ``mask``."""
        return float(self.w[mask].sum())


def init_weights(n: int) -> WeightVector:
    """
    Uniform weights over ``n`` experts.

    Raises:
        ParameterError: If ``n < 1``

    Example:
        >>> init_weights(4).w
        array([0.25, 0.25, 0.25, 0.25])
    """
    if n < 1:
        raise ParameterError("need at least one expert", details={"n": n})
    return WeightVector(
        w=np.full(n, 1.0 / n, dtype=np.float64),
        log_w=np.full(n, -np.log(n), dtype=np.float64),
    )


def _predictions(weights: WeightVector, preds: Sequence[float]) -> npt.NDArray[np.float64]:
    arr = as_vector(preds, field_name="preds")
    if arr.shape[0] != len(weights):
        raise ShapeError(
            "prediction count does not match weight count",
            details={"weights": len(weights), "predictions": int(arr.shape[0])},
        )
    if not np.isfinite(arr).all():
        raise DataValueError("expert predictions must be finite")
    return arr


def aggregate_predict(weights: WeightVector, preds: Sequence[float]) -> float:
    """
    Weighted sum of expert predictions.

    The result is kept inside ``[min(preds), max(preds)]`` against rounding.

    Raises:
        ShapeError: If ``len(preds) != len(weights)``

    Example:
        >>> aggregate_predict(WeightVector(np.array([0.25, 0.75]), np.log([0.25, 0.75])), [0, 4])
        3.0
    """
    arr = _predictions(weights, preds)
    lo, hi = float(arr.min()), float(arr.max())
    if lo == hi:
        return lo
    return float(np.clip(np.dot(weights.w, arr), lo, hi))


def update_weights(
    weights: WeightVector, preds: Sequence[float], y: float, eta: float
) -> WeightVector:
    """
    Multiplicative update ``w[n] * exp(-eta * (preds[n] - y)^2)``, renormalized.

    ``eta == 0`` and equal losses across experts return ``weights`` unchanged.

    Raises:
        ParameterError: If ``eta < 0``
        ShapeError: If ``len(preds) != len(weights)``
        DataValueError: If ``y`` or a prediction is NaN

    Example:
        >>> update_weights(init_weights(2), [1.0, 0.0], 1.0, np.log(2)).w
        array([0.66666667, 0.33333333])
    """
    validate_range(eta, min_value=0.0, field_name="eta")
    arr = _predictions(weights, preds)
    validate_finite(float(y), "observation")

    losses = (arr - y) ** 2
    if eta == 0 or float(np.ptp(losses)) == 0.0:
        return weights

    log_w = weights.log_w - eta * losses
    log_w = log_w - log_w.max()
    w = np.exp(log_w)
    total = w.sum()
    return WeightVector(w=w / total, log_w=log_w - np.log(total))
