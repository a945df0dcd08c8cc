"""
Online expert aggregation.

Modules:
    aggregation: Exponential weights over expert predictions
    estimator: Walk-forward adaptive estimator (batch and streaming)
"""

from nowcast_core.online.aggregation import (
    WeightVector,
    aggregate_predict,
    init_weights,
    update_weights,
)
from nowcast_core.online.estimator import AdaptiveEstimator, run

__all__ = [
    "WeightVector",
    "init_weights",
    "aggregate_predict",
    "update_weights",
    "AdaptiveEstimator",
    "run",
]
