"""
Linear baselines: lasso and elastic net fitted by coordinate descent.

Modules:
    linear: Solver, standardization and cross-validated penalty selection
    runner: Walk-forward evaluation of a baseline
"""

from nowcast_core.baselines.linear import (
    LinearModel,
    cv_select,
    fit_enet,
    fit_selected,
    lambda_max,
    soft_threshold,
)
from nowcast_core.baselines.runner import run_baseline

__all__ = [
    "soft_threshold",
    "lambda_max",
    "fit_enet",
    "cv_select",
    "fit_selected",
    "LinearModel",
    "run_baseline",
]
