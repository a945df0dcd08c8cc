"""Error metrics for walk-forward traces."""

from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from nowcast_core.models.results import EstimationTrace
from nowcast_core.utils.exceptions import ParameterError


def _pair(
    predictions: Sequence[float], observations: Sequence[float]
) -> Tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    p = np.asarray(predictions, dtype=np.float64).reshape(-1)
    o = np.asarray(observations, dtype=np.float64).reshape(-1)
    if p.shape[0] != o.shape[0]:
        raise ParameterError(
            "predictions and observations differ in length",
            details={"predictions": int(p.shape[0]), "observations": int(o.shape[0])},
        )
    if p.shape[0] == 0:
        raise ParameterError("cannot score an empty prediction list")
    return p, o


def rmse(predictions: Sequence[float], observations: Sequence[float]) -> float:
    """
    Root mean squared error.

    Raises:
        ParameterError: If the lists are empty or differ in length

    Example:
        >>> rmse([1.0, 2.0], [1.0, 4.0])
        1.4142135623730951
    """
    p, o = _pair(predictions, observations)
    err = p - o
    return float(np.sqrt(np.mean(err * err)))


def mae(predictions: Sequence[float], observations: Sequence[float]) -> float:
    """Mean absolute error."""
    p, o = _pair(predictions, observations)
    return float(np.mean(np.abs(p - o)))


def evaluate_trace(
    trace: EstimationTrace, t0: Optional[int] = None, t1: Optional[int] = None
) -> Dict[str, float]:
    """
    RMSE and MAE of the trace steps in ``[t0, t1)``.

    Raises:
        ParameterError: If no step falls in the range
    """
    scoped = trace.restrict(t0 if t0 is not None else 0, t1)
    p, o = scoped.predictions(), scoped.observations()
    return {"rmse": rmse(p, o), "mae": mae(p, o), "n_predictions": float(len(scoped))}
