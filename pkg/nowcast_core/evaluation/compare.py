"""
Method comparison across named datasets.

Runs every method on every series with a shared warmup, scores all methods
on their common predicted range and flags the best one per series. When a
method is tuned, scoring starts after the tuning range so the search never
sees the steps it is judged on.
"""

from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from pydantic import ValidationError

from nowcast_core.base.methods import AdaptiveMethod
from nowcast_core.evaluation.search import default_tune_range
from nowcast_core.interfaces.method import EstimationMethod
from nowcast_core.models.config import (
    DEFAULT_WARMUP,
    BaselineConfig,
    EstimatorConfig,
    MethodSpec,
)
from nowcast_core.models.results import ComparisonReport, EstimationTrace, ReportRow
from nowcast_core.models.timeseries import Dataset
from nowcast_core.registry.method_registry import MethodRegistry
from nowcast_core.utils.exceptions import (
    ConfigError,
    InsufficientHistoryError,
    NowcastError,
    ParameterError,
)
from nowcast_core.utils.logging import get_logger

logger = get_logger(__name__)


def build_method(
    spec: MethodSpec,
    registry: MethodRegistry,
    warmup: int = DEFAULT_WARMUP,
    n_jobs: int = 1,
    tune_range: Optional[Tuple[int, int]] = None,
) -> EstimationMethod:
    """
    Instantiate the method a spec describes.

    Built-in methods get ``warmup`` unless their config sets one.

    Raises:
        ConfigError: If the method config is invalid
        RegistryError: If the method name is unknown
    """
    config = {"warmup": warmup, **spec.config}
    try:
        if spec.method == AdaptiveMethod.name:
            return AdaptiveMethod(
                EstimatorConfig(**config),
                n_jobs=n_jobs,
                tune_trials=spec.tune_trials,
                tune_seed=spec.tune_seed,
                intervals=spec.intervals,
                tune_range=tune_range,
            )
        if spec.method in ("lasso", "enet"):
            return registry.create(spec.method, config=BaselineConfig(**config))
    except ValidationError as e:
        raise ConfigError(
            f"invalid configuration for method '{spec.display}'",
            details={"method": spec.display, "errors": e.errors(include_url=False)},
            cause=e,
        )
    return registry.create(spec.method, **spec.config)


def common_range(traces: Sequence[EstimationTrace]) -> Tuple[int, int]:
    """``[lo, hi)`` covered by every trace."""
    lo = max(tr.steps[0].t if tr.steps else 0 for tr in traces)
    hi = min(tr.steps[-1].t + 1 if tr.steps else 0 for tr in traces)
    return lo, hi


def compare(
    datasets: Mapping[str, Dataset],
    methods: Sequence[MethodSpec],
    warmup: int = DEFAULT_WARMUP,
    score_from: Optional[int] = None,
    references: Optional[Dict[str, Dict[str, float]]] = None,
    registry: Optional[MethodRegistry] = None,
    n_jobs: int = 1,
) -> ComparisonReport:
    """
    Run every method on every dataset and build the RMSE report.

    Args:
        datasets: Series label to dataset, in report order
        methods: Method columns, in report order
        warmup: Shared warmup
        score_from: First scored step; defaults to the end of the default
            tuning range when any method is tuned
        references: Optional reference RMSEs per series (report annotations)
        registry: Method registry (built-ins by default)
        n_jobs: Worker threads for tree retraining and tuning

    Returns:
        Report with the lowest-RMSE method flagged per series, first listed
        method on ties

    Raises:
        ParameterError: If no dataset or method is given, or labels repeat
        NowcastError: Errors of a method run, with ``series`` and ``method``
            in ``details``

    Example:
        >>> methods = [MethodSpec(method="atse"), MethodSpec(method="lasso")]
        >>> compare({"drop": ds}, methods).best_method("drop")
    """
    if not datasets or not methods:
        raise ParameterError("compare needs at least one dataset and one method")
    labels = [m.display for m in methods]
    if len(set(labels)) != len(labels):
        raise ParameterError("method labels must be unique", details={"labels": labels})
    registry = registry or MethodRegistry()
    tuned = any(m.tune_trials > 0 for m in methods)

    rows: List[ReportRow] = []
    for series, ds in datasets.items():
        tune_range = default_tune_range(len(ds), warmup) if tuned else None
        start = score_from if score_from is not None else (tune_range[1] if tune_range else 0)

        traces: List[EstimationTrace] = []
        for spec in methods:
            method = build_method(spec, registry, warmup, n_jobs, tune_range)
            try:
                traces.append(method.run(ds, series=series))
            except NowcastError as e:
                raise type(e)(
                    f"{spec.display} on {series}: {e.message}",
                    details={**e.details, "series": series, "method": spec.display},
                    cause=e,
                )

        lo, hi = common_range(traces)
        lo = max(lo, start)
        if hi <= lo:
            raise InsufficientHistoryError(
                "methods share no scored step",
                details={"series": series, "range": [lo, hi]},
            )
        scores = [tr.restrict(lo, hi) for tr in traces]
        best = min(range(len(scores)), key=lambda i: (scores[i].rmse, i))
        for i, (spec, scored) in enumerate(zip(methods, scores)):
            rows.append(
                ReportRow(
                    series=series,
                    method=spec.display,
                    rmse=scored.rmse,
                    n_predictions=len(scored),
                    best=i == best,
                )
            )
        logger.info(
            "series_compared",
            series=series,
            scored_range=[lo, hi],
            best=labels[best],
            rmse={labels[i]: round(s.rmse, 6) for i, s in enumerate(scores)},
        )

    return ComparisonReport(rows=rows, references=references or {})
