"""
Adaptive time-series estimator.

Warm-starts on the first observations, then loops: retrain every expert on
the history before ``t``, predict the weighted sum of expert estimates,
observe ``y_t``, update the weights, extend the history. The same loop backs
the batch :func:`run` and the streaming ``step_predict``/``step_observe``
interface, so both produce identical traces.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from nowcast_core.features.featurization import FeatureView, schema_for, select_terms
from nowcast_core.models.config import EstimatorConfig
from nowcast_core.models.features import FeatureSchema
from nowcast_core.models.results import EstimationTrace, TraceStep
from nowcast_core.models.timeseries import Dataset, MonthIndex
from nowcast_core.online.aggregation import (
    WeightVector,
    aggregate_predict,
    init_weights,
    update_weights,
)
from nowcast_core.trees.ensemble import ExpertPool, init_specs, retrain
from nowcast_core.utils.exceptions import InsufficientHistoryError, ProtocolError
from nowcast_core.utils.logging import get_logger
from nowcast_core.utils.validation import as_vector

logger = get_logger(__name__)


class _Pending:
    __slots__ = ("t", "web", "preds", "prediction")

    def __init__(
        self,
        t: int,
        web: npt.NDArray[np.float64],
        preds: npt.NDArray[np.float64],
        prediction: float,
    ):
        self.t = t
        self.web = web
        self.preds = preds
        self.prediction = prediction


class AdaptiveEstimator:
    """
    Streaming state of the adaptive estimator.

    Single-owner object: ``step_predict`` and ``step_observe`` must alternate.

    Example:
        >>> est = AdaptiveEstimator(EstimatorConfig(n_trees=100))
        >>> est.start(ds)
        >>> for t in range(est.t, len(ds)):
        ...     y_hat = est.step_predict(ds.web()[t])
        ...     est.step_observe(ds.target()[t])
        >>> trace = est.trace()
    """

    def __init__(
        self,
        cfg: EstimatorConfig,
        n_jobs: int = 1,
        record_weights: bool = False,
        series: Optional[str] = None,
    ):
        self.cfg = cfg
        self.n_jobs = n_jobs
        self.record_weights = record_weights
        self.series = series

        self.t = 0
        self.terms: Tuple[int, ...] = ()
        self.schema: Optional[FeatureSchema] = None
        self.view: Optional[FeatureView] = None
        self.pool: Optional[ExpertPool] = None
        self._weights: Optional[WeightVector] = None
        self._start_month: Optional[MonthIndex] = None
        self._n_panel_terms = 0
        self._pending: Optional[_Pending] = None
        self._last_preds: Optional[npt.NDArray[np.float64]] = None
        self._steps: List[TraceStep] = []
        self._weights_history: List[Tuple[float, ...]] = []

    def start(self, ds: Dataset, history_end: Optional[int] = None) -> None:
        """
        Consume the warmup history ``[0, history_end)`` of ``ds``.

        Selects the query terms on that history, draws the expert population
        and sets uniform weights. The next step to predict is ``history_end``
        (``cfg.first_step`` by default).

        Raises:
            InsufficientHistoryError: If ``ds`` is shorter than the history
            ParameterError: If the configuration cannot be realized on ``ds``
        """
        end = self.cfg.first_step if history_end is None else history_end
        if end < self.cfg.first_step or end > len(ds):
            raise InsufficientHistoryError(
                "dataset too short for the warmup history",
                details={"history_end": end, "first_step": self.cfg.first_step, "length": len(ds)},
            )
        self.terms = tuple(select_terms(ds, self.cfg.n_web, end))
        self.schema = schema_for(ds, self.cfg.n_lags, self.terms)
        self.view = FeatureView.from_dataset(ds, self.schema, t_end=end)
        self.pool = ExpertPool(
            init_specs(
                self.schema.n_features,
                self.cfg.n_trees,
                self.cfg.window_interval,
                self.cfg.tree_params,
                self.cfg.master_seed,
            )
        )
        self._weights = init_weights(self.cfg.n_trees)
        self._start_month = ds.start
        self._n_panel_terms = ds.n_terms
        self._pending = None
        self._last_preds = None
        self._steps = []
        self._weights_history = []
        self.t = end
        logger.info(
            "estimator_started",
            first_step=end,
            n_trees=self.cfg.n_trees,
            n_features=self.schema.n_features,
            terms=list(self.schema.term_labels),
        )

    def _require_started(self) -> None:
        if self.view is None or self.pool is None or self._weights is None:
            raise ProtocolError("estimator has not been started")

    @property
    def weights(self) -> WeightVector:
        self._require_started()
        assert self._weights is not None
        return self._weights

    @property
    def expert_predictions(self) -> Optional[npt.NDArray[np.float64]]:
        """Per-expert predictions of the most recent ``step_predict``."""
        if self._pending is not None:
            return self._pending.preds
        return self._last_preds

    def window_mass(self, lo: int, hi: int) -> float:
        """Weight mass on experts whose window lies in ``[lo, hi]``."""
        self._require_started()
        assert self.pool is not None and self._weights is not None
        windows = self.pool.windows
        return self._weights.mass((windows >= lo) & (windows <= hi))

    def step_predict(self, web_row: Sequence[float]) -> float:
        """
        Predict step ``self.t`` from the panel row observed at that step.

        Args:
            web_row: Frequencies of every panel term at ``t``

        Returns:
            Weighted-sum prediction

        Raises:
            ProtocolError: If a prediction is already pending
            ShapeError: If ``web_row`` does not cover the panel
        """
        self._require_started()
        if self._pending is not None:
            raise ProtocolError(
                "step_predict called twice without step_observe",
                details={"t": self._pending.t},
            )
        assert self.view is not None and self.pool is not None and self._weights is not None
        panel_row = as_vector(web_row, self._n_panel_terms, "web_row")
        web = panel_row[list(self.terms)] if self.terms else np.empty(0, dtype=np.float64)

        self.pool = retrain(self.pool, self.view, self.t, n_jobs=self.n_jobs)
        preds = self.pool.predict(self.view.pending_row(web))
        prediction = aggregate_predict(self._weights, preds)
        self._pending = _Pending(self.t, web, preds, prediction)
        logger.debug("step_predicted", t=self.t, prediction=prediction)
        return prediction

    def step_observe(self, y: float) -> None:
        """
        Reveal ``y_t``: update weights with the cached expert predictions and
        extend the history.

        Raises:
            ProtocolError: If no prediction is pending
            DataValueError: If ``y`` is not finite (state unchanged)
        """
        if self._pending is None:
            raise ProtocolError("step_observe called without a pending prediction")
        assert self.view is not None and self._weights is not None
        pending = self._pending
        new_weights = update_weights(self._weights, pending.preds, y, self.cfg.eta)
        self.view.append(pending.web, float(y))

        self._weights = new_weights
        self._last_preds = pending.preds
        self._pending = None
        month = self._start_month.shift(pending.t) if self._start_month is not None else None
        self._steps.append(
            TraceStep(
                t=pending.t,
                month=str(month) if month is not None else "",
                prediction=pending.prediction,
                observation=float(y),
            )
        )
        if self.record_weights:
            self._weights_history.append(new_weights.as_tuple())
        self.t += 1
        logger.debug("step_observed", t=pending.t, observation=float(y))

    def trace(self, method: str = "atse") -> EstimationTrace:
        """Trace of every completed step so far."""
        return EstimationTrace(
            method=method,
            series=self.series,
            steps=list(self._steps),
            weights_history=list(self._weights_history) if self.record_weights else None,
        )


def run(
    ds: Dataset,
    cfg: EstimatorConfig,
    record_weights: bool = False,
    n_jobs: int = 1,
    series: Optional[str] = None,
) -> EstimationTrace:
    """
    Walk-forward run over the whole dataset.

    Predicts every step from ``cfg.first_step`` to the end of ``ds``.

    Raises:
        InsufficientHistoryError: If ``len(ds) <= cfg.first_step``
        ParameterError: If the configuration cannot be realized on ``ds``

    Example:
        >>> trace = run(ds, EstimatorConfig(n_trees=200, n_lags=3, n_web=2))
        >>> trace.rmse
    """
    if len(ds) <= cfg.first_step:
        raise InsufficientHistoryError(
            "dataset too short for a walk-forward run",
            details={"length": len(ds), "first_step": cfg.first_step},
        )
    estimator = AdaptiveEstimator(cfg, n_jobs=n_jobs, record_weights=record_weights, series=series)
    estimator.start(ds)
    web = ds.web()
    target = ds.target()
    for t in range(estimator.t, len(ds)):
        estimator.step_predict(web[t])
        estimator.step_observe(float(target[t]))
    trace = estimator.trace()
    logger.info(
        "estimation_completed",
        series=series,
        steps=len(trace),
        rmse=trace.rmse,
        n_trees=cfg.n_trees,
        eta=cfg.eta,
    )
    return trace
