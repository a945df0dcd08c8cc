"""
Seeded end-to-end experiments on the canonical synthetic scenarios.

These use full-size ensembles and are excluded from the default run;
select them with ``pytest -m slow``.
"""

import numpy as np
import pytest

from nowcast_core.baselines.runner import run_baseline
from nowcast_core.data.synthgen import (
    REGIME_SHIFT_PRESETS,
    decouple_queries,
    generate,
    preset,
)
from nowcast_core.evaluation.compare import compare
from nowcast_core.models.config import (
    BaselineConfig,
    EstimatorConfig,
    MethodSpec,
    SearchIntervals,
)
from nowcast_core.online.estimator import AdaptiveEstimator, run
from tests.fixtures.sample_data import create_sample_dataset

pytestmark = pytest.mark.slow

FULL_CONFIG = EstimatorConfig(eta=0.05, n_trees=1000, n_lags=2, n_web=2, master_seed=1)
TUNED_INTERVALS = SearchIntervals(n_trees=(500, 500))


def _methods(trials: int = 25):
    return [
        MethodSpec(
            method="atse", tune_trials=trials, tune_seed=0, intervals=TUNED_INTERVALS
        ),
        MethodSpec(method="lasso"),
        MethodSpec(method="enet"),
    ]


@pytest.mark.parametrize("name", REGIME_SHIFT_PRESETS)
def test_batch_matches_streaming(name):
    """Test the batch run and the streaming loop agree bit for bit."""
    ds = generate(preset(name, seed=3))
    batch = run(ds, FULL_CONFIG, record_weights=True, n_jobs=4)
    estimator = AdaptiveEstimator(FULL_CONFIG, record_weights=True)
    estimator.start(ds)
    for t in range(estimator.t, len(ds)):
        estimator.step_predict(ds.web()[t])
        estimator.step_observe(float(ds.target()[t]))
    stream = estimator.trace()
    assert batch.predictions().tolist() == stream.predictions().tolist()
    weights = np.asarray(batch.weights_history)
    assert np.all(weights >= 0.0)
    np.testing.assert_allclose(weights.sum(axis=1), 1.0, atol=1e-9)


@pytest.mark.parametrize("name", ["regime_drop", "supply_shortage", "media_scare"])
def test_poisoned_future_leaves_past_unchanged(name):
    """Test sentinel values after a cut never reach earlier predictions."""
    ds = generate(preset(name, seed=4))
    cut = 55
    values = list(ds.uptake.values)
    poisoned = create_sample_dataset(
        values[:cut] + [1e6] * (len(values) - cut),
        [list(row) for row in ds.panel.matrix],
        labels=ds.panel.terms,
    )
    config = FULL_CONFIG.model_copy(update={"n_trees": 200})
    a = run(ds, config).restrict(0, cut)
    b = run(poisoned, config).restrict(0, cut)
    assert a.predictions().tolist() == b.predictions().tolist()
    for kind in ("lasso", "enet"):
        cfg = BaselineConfig(kind=kind, n_lags=2)
        a = run_baseline(ds, cfg).restrict(0, cut)
        b = run_baseline(poisoned, cfg).restrict(0, cut)
        assert a.predictions().tolist() == b.predictions().tolist()


def test_adaptation_beats_baselines_after_regime_shifts():
    """Test tuned ensembles beat both linear baselines once the query relation breaks."""
    datasets = {
        name: generate(decouple_queries(preset(name, seed=0))) for name in REGIME_SHIFT_PRESETS
    }
    report = compare(datasets, _methods(), n_jobs=4)
    wins = 0
    for series in report.series():
        scores = {r.method: r.rmse for r in report.rows if r.series == series}
        wins += scores["atse"] < min(scores["lasso"], scores["enet"])
    assert wins >= 4


def test_stationary_series_stay_competitive():
    """Test the ensemble stays within 1.5x of the best baseline without shifts."""
    datasets = {f"stationary-{s}": generate(preset("stationary", seed=s)) for s in range(3)}
    report = compare(datasets, _methods(), n_jobs=4)
    for series in report.series():
        scores = {r.method: r.rmse for r in report.rows if r.series == series}
        assert scores["atse"] <= 1.5 * min(scores["lasso"], scores["enet"])
