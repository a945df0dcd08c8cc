"""
Random hyperparameter search for the adaptive estimator.

Every trial draws a configuration from :class:`SearchIntervals` and is scored
by the walk-forward RMSE of its predictions inside the tuning range. The run
is cut at the end of the tuning range so later observations never influence
a trial. All configurations are drawn up front from one seeded stream, so the
trial log does not depend on evaluation order or concurrency.
"""

import asyncio
import math
from typing import List, Optional, Tuple

import numpy as np

from nowcast_core.base.executor import TrialExecutor
from nowcast_core.models.config import (
    DEFAULT_TRIALS,
    EstimatorConfig,
    SearchIntervals,
)
from nowcast_core.models.results import TrialRecord
from nowcast_core.models.timeseries import Dataset
from nowcast_core.online.estimator import run
from nowcast_core.utils.exceptions import NowcastError, ParameterError
from nowcast_core.utils.logging import get_logger

logger = get_logger(__name__)

MAX_SEED = 2**31 - 1


def default_tune_range(length: int, warmup: int) -> Tuple[int, int]:
    """
    First half of the post-warmup steps ``[warmup + 1, length)``.

    Raises:
        ParameterError: If the half is empty
    """
    first = warmup + 1
    end = first + (length - first) // 2
    if end <= first:
        raise ParameterError(
            "dataset too short for a default tuning range",
            details={"length": length, "warmup": warmup},
        )
    return first, end


def sample_configs(
    intervals: SearchIntervals,
    n_samples: int,
    seed: int,
    n_terms: int,
    base: Optional[EstimatorConfig] = None,
) -> List[EstimatorConfig]:
    """
    Draw ``n_samples`` configurations.

    Counts are uniform integers over the inclusive intervals, ``eta`` is
    continuous uniform. The per-run window interval is ``(lo, hi')`` with
    ``hi'`` uniform in ``[lo, hi]``, so trees of one trial still get different
    window sizes. ``n_web`` is capped at the panel's term count.

    Raises:
        ParameterError: If ``n_samples < 1``
    """
    if n_samples < 1:
        raise ParameterError("n_samples must be at least 1", details={"n_samples": n_samples})
    base = base or EstimatorConfig()
    rng = np.random.default_rng(seed)
    configs = []
    for _ in range(n_samples):
        w_lo, w_hi = intervals.window
        window_hi = int(rng.integers(w_lo, w_hi + 1))
        n_lags = int(rng.integers(intervals.n_lags[0], intervals.n_lags[1] + 1))
        n_web = int(rng.integers(intervals.n_web[0], intervals.n_web[1] + 1))
        n_trees = int(rng.integers(intervals.n_trees[0], intervals.n_trees[1] + 1))
        eta = float(rng.uniform(intervals.eta[0], intervals.eta[1]))
        master_seed = int(rng.integers(0, MAX_SEED))
        configs.append(
            base.model_copy(
                update={
                    "window_interval": (w_lo, window_hi),
                    "n_lags": n_lags,
                    "n_web": min(n_web, n_terms),
                    "n_trees": n_trees,
                    "eta": eta,
                    "master_seed": master_seed,
                }
            )
        )
    return configs


def _failed(index: int, cfg: EstimatorConfig, error: str) -> TrialRecord:
    return TrialRecord(index=index, config=cfg, rmse=math.inf, status="failed", error=error)


def evaluate_config(
    ds: Dataset, cfg: EstimatorConfig, tune_range: Tuple[int, int], index: int = 0
) -> TrialRecord:
    """
    Score one configuration on the tuning range.

    Any exception raised by the run is recorded as a failed trial with
    ``rmse = inf``, the same record :class:`TrialExecutor` produces, so the
    trial log does not depend on ``n_jobs``.
    """
    t0, t1 = tune_range
    try:
        trace = run(ds.slice(0, t1), cfg).restrict(t0, t1)
    except NowcastError as e:
        logger.warning("trial_failed", trial=index, error=e.message)
        return _failed(index, cfg, str(e))
    except Exception as e:
        logger.error("trial_execution_failed", trial=index, error=str(e))
        return _failed(index, cfg, str(e))
    if len(trace) == 0:
        return _failed(index, cfg, "no predictions inside the tuning range")
    logger.info("trial_completed", trial=index, rmse=trace.rmse, n_predictions=len(trace))
    return TrialRecord(index=index, config=cfg, rmse=trace.rmse, n_predictions=len(trace))


async def run_trials_async(
    ds: Dataset,
    configs: List[EstimatorConfig],
    tune_range: Tuple[int, int],
    max_concurrent: int = 4,
) -> List[TrialRecord]:
    """Evaluate configurations with bounded concurrency; log ordered by trial index."""
    executor = TrialExecutor(max_concurrent=max_concurrent)

    def evaluate(index: int, cfg: EstimatorConfig) -> TrialRecord:
        return evaluate_config(ds, cfg, tune_range, index)

    return await executor.execute(list(enumerate(configs)), evaluate)


def _check_range(ds: Dataset, tune_range: Tuple[int, int]) -> None:
    t0, t1 = tune_range
    if not 0 <= t0 < t1 <= len(ds):
        raise ParameterError(
            "tune_range outside dataset",
            details={"tune_range": [t0, t1], "length": len(ds)},
        )


def best_trial(trials: List[TrialRecord]) -> TrialRecord:
    """
    Lowest-RMSE trial, earlier trial on ties.

    Raises:
        ParameterError: If every trial failed
    """
    ok = [tr for tr in trials if tr.status == "ok"]
    if not ok:
        raise ParameterError(
            "no trial produced predictions in the tuning range",
            details={"trials": len(trials), "first_error": trials[0].error if trials else None},
        )
    return min(ok, key=lambda tr: (tr.rmse, tr.index))


def random_search(
    ds: Dataset,
    intervals: Optional[SearchIntervals] = None,
    n_samples: int = DEFAULT_TRIALS,
    tune_range: Optional[Tuple[int, int]] = None,
    seed: int = 0,
    base: Optional[EstimatorConfig] = None,
    n_jobs: int = 1,
) -> Tuple[EstimatorConfig, List[TrialRecord]]:
    """
    Random search over the estimator hyperparameters.

    Args:
        ds: Dataset
        intervals: Search intervals (published defaults when omitted)
        n_samples: Number of trials
        tune_range: Steps ``[t0, t1)`` whose predictions are scored
            (first half of the post-warmup steps by default)
        seed: Seed of the sampling stream
        base: Template for fields not searched (warmup, tree limits)
        n_jobs: Trials evaluated concurrently

    Returns:
        The winning configuration and the full trial log

    Raises:
        ParameterError: If the range is invalid, ``n_samples < 1`` or every
            trial failed

    Example:
        >>> best, log = random_search(ds, n_samples=25, tune_range=(25, 50), seed=7)
    """
    intervals = intervals or SearchIntervals()
    base = base or EstimatorConfig()
    tune_range = tune_range or default_tune_range(len(ds), base.warmup)
    _check_range(ds, tune_range)
    configs = sample_configs(intervals, n_samples, seed, ds.n_terms, base)
    logger.info(
        "random_search_started",
        trials=n_samples,
        tune_range=list(tune_range),
        seed=seed,
        n_jobs=n_jobs,
    )

    if n_jobs > 1:
        trials = asyncio.run(run_trials_async(ds, configs, tune_range, max_concurrent=n_jobs))
    else:
        trials = [evaluate_config(ds, cfg, tune_range, i) for i, cfg in enumerate(configs)]

    winner = best_trial(trials)
    logger.info(
        "random_search_completed",
        best_trial=winner.index,
        rmse=winner.rmse,
        failed=sum(1 for tr in trials if tr.status == "failed"),
    )
    return winner.config, trials
