"""
Built-in estimation methods.

``atse`` is the adaptive tree-ensemble estimator, optionally tuned by random
search before its run; ``lasso`` and ``enet`` are the cross-validated linear
baselines.
"""

from typing import Any, Dict, List, Optional, Tuple

from nowcast_core.baselines.runner import first_step as baseline_first_step
from nowcast_core.baselines.runner import run_baseline
from nowcast_core.evaluation.search import random_search
from nowcast_core.interfaces.method import EstimationMethod
from nowcast_core.models.config import BaselineConfig, EstimatorConfig, SearchIntervals
from nowcast_core.models.results import EstimationTrace, TrialRecord
from nowcast_core.models.timeseries import Dataset
from nowcast_core.online.estimator import run
from nowcast_core.utils.logging import get_logger

logger = get_logger(__name__)


class AdaptiveMethod(EstimationMethod):
    """
    Adaptive time-series estimator.

    With ``tune_trials > 0`` the configuration is chosen by random search on
    the tuning range before the full run; the search winner replaces
    ``config`` and the trial log is kept on ``trials``.

    Example:
        >>> method = AdaptiveMethod(EstimatorConfig(n_trees=500), tune_trials=25)
        >>> trace = method.run(ds)
    """

    name = "atse"

    def __init__(
        self,
        config: Optional[EstimatorConfig] = None,
        n_jobs: int = 1,
        record_weights: bool = False,
        tune_trials: int = 0,
        tune_seed: int = 0,
        intervals: Optional[SearchIntervals] = None,
        tune_range: Optional[Tuple[int, int]] = None,
    ):
        self.config = config or EstimatorConfig()
        self.n_jobs = n_jobs
        self.record_weights = record_weights
        self.tune_trials = tune_trials
        self.tune_seed = tune_seed
        self.intervals = intervals
        self.tune_range = tune_range
        self.trials: List[TrialRecord] = []
        self.last_config: Optional[EstimatorConfig] = None

    @property
    def first_step(self) -> Optional[int]:
        return None if self.tune_trials else self.config.first_step

    def run(self, ds: Dataset, series: Optional[str] = None) -> EstimationTrace:
        config = self.config
        if self.tune_trials > 0:
            config, self.trials = random_search(
                ds,
                intervals=self.intervals,
                n_samples=self.tune_trials,
                tune_range=self.tune_range,
                seed=self.tune_seed,
                base=self.config,
                n_jobs=self.n_jobs,
            )
            logger.info("method_tuned", method=self.name, series=series)
        self.last_config = config
        return run(
            ds, config, record_weights=self.record_weights, n_jobs=self.n_jobs, series=series
        )

    def describe(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "name": self.name,
            "config": self.config.model_dump(mode="json"),
        }
        if self.tune_trials:
            payload["tune"] = {"trials": self.tune_trials, "seed": self.tune_seed}
        if self.last_config is not None and self.last_config != self.config:
            payload["tuned_config"] = self.last_config.model_dump(mode="json")
        return payload


class LassoMethod(EstimationMethod):
    """Cross-validated lasso baseline."""

    name = "lasso"

    def __init__(self, config: Optional[BaselineConfig] = None):
        base = config or BaselineConfig()
        self.config = base.model_copy(update={"kind": self.name})

    @property
    def first_step(self) -> Optional[int]:
        return baseline_first_step(self.config)

    def run(self, ds: Dataset, series: Optional[str] = None) -> EstimationTrace:
        return run_baseline(ds, self.config, series=series)

    def describe(self) -> Dict[str, Any]:
        return {"name": self.name, "config": self.config.model_dump(mode="json")}


class ElasticNetMethod(LassoMethod):
    """Cross-validated elastic-net baseline."""

    name = "enet"
