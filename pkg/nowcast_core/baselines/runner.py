"""
Walk-forward runner for the linear baselines.

At every step ``t`` the model is selected by cross-validation on all rows
before ``t``, refitted on them, and asked for ``t``. Term selection and the
first predicted step follow the adaptive estimator so both cover the same
range.
"""

from typing import Optional

from nowcast_core.baselines.linear import LinearModel, fit_selected
from nowcast_core.features.featurization import FeatureView, schema_for, select_terms
from nowcast_core.models.config import BaselineConfig
from nowcast_core.models.features import FeatureSchema
from nowcast_core.models.results import EstimationTrace, TraceStep
from nowcast_core.models.timeseries import Dataset
from nowcast_core.utils.exceptions import InsufficientHistoryError
from nowcast_core.utils.logging import get_logger

logger = get_logger(__name__)

MAX_DEFAULT_TERMS = 30


def first_step(cfg: BaselineConfig) -> int:
    return max(cfg.warmup, cfg.n_lags) + 1


def baseline_schema(ds: Dataset, cfg: BaselineConfig) -> FeatureSchema:
    """Lags plus the terms most correlated with uptake over the warmup history."""
    n_web = cfg.n_web if cfg.n_web is not None else min(ds.n_terms, MAX_DEFAULT_TERMS)
    terms = select_terms(ds, n_web, min(first_step(cfg), len(ds)))
    return schema_for(ds, cfg.n_lags, terms)


def fit_baseline_at(view: FeatureView, cfg: BaselineConfig, t: int) -> LinearModel:
    """
    Model used to predict step ``t``: fitted on every valid row before ``t``.

    Raises:
        InsufficientHistoryError: If no row precedes ``t``
    """
    X, y = view.training_rows(0, t)
    return fit_selected(
        X,
        y,
        cfg.grid(),
        k=cfg.folds,
        tol=cfg.tol,
        max_iter=cfg.max_iter,
        hyper=None if cfg.cv else cfg.hyper,
    )


def run_baseline(
    ds: Dataset,
    cfg: BaselineConfig,
    schema: Optional[FeatureSchema] = None,
    series: Optional[str] = None,
) -> EstimationTrace:
    """
    Walk-forward evaluation of a lasso or elastic-net baseline.

    Args:
        ds: Dataset
        cfg: Baseline settings
        schema: Explicit feature layout (selected from ``cfg`` by default)
        series: Series label for the trace

    Returns:
        Trace with the same structure as the adaptive estimator's

    Raises:
        InsufficientHistoryError: If the dataset has no step to predict
        ParameterError: If the configuration cannot be realized on ``ds``

    Example:
        >>> trace = run_baseline(ds, BaselineConfig(kind="enet", n_lags=2))
    """
    start = first_step(cfg)
    if len(ds) <= start:
        raise InsufficientHistoryError(
            "dataset too short for a walk-forward run",
            details={"length": len(ds), "first_step": start},
        )
    schema = schema or baseline_schema(ds, cfg)
    view = FeatureView.from_dataset(ds, schema)

    steps = []
    for t in range(start, len(ds)):
        model = fit_baseline_at(view, cfg, t)
        prediction = model.predict_one(view.row(t))
        steps.append(
            TraceStep(
                t=t,
                month=str(ds.month_at(t)),
                prediction=prediction,
                observation=float(view.target[t]),
            )
        )
        logger.debug(
            "baseline_step",
            kind=cfg.kind,
            t=t,
            lam=model.hyper.lam,
            alpha=model.hyper.alpha,
            prediction=prediction,
        )

    trace = EstimationTrace(method=cfg.kind, series=series, steps=steps)
    logger.info(
        "baseline_completed",
        kind=cfg.kind,
        series=series,
        steps=len(trace),
        rmse=trace.rmse,
        n_features=schema.n_features,
    )
    return trace
