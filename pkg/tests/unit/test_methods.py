"""Tests for the built-in estimation methods."""

from nowcast_core.base.methods import AdaptiveMethod, ElasticNetMethod, LassoMethod
from nowcast_core.models.config import BaselineConfig, SearchIntervals
from nowcast_core.online.estimator import run
from tests.fixtures.sample_data import create_small_baseline

TINY_INTERVALS = SearchIntervals(
    window=(1, 6), n_lags=(1, 2), n_web=(1, 2), n_trees=(3, 4), eta=(0.01, 0.1)
)


class TestAdaptiveMethod:
    """Tests for AdaptiveMethod."""

    def test_run_matches_estimator(self, drop_dataset, small_config):
        """Test the method is a thin wrapper over the estimator."""
        method = AdaptiveMethod(small_config)
        trace = method.run(drop_dataset, series="drop")
        expected = run(drop_dataset, small_config)
        assert trace.predictions().tolist() == expected.predictions().tolist()
        assert trace.series == "drop"
        assert method.last_config == small_config
        assert method.first_step == 25

    def test_describe(self, small_config):
        """Test the description holds the configuration."""
        payload = AdaptiveMethod(small_config).describe()
        assert payload["name"] == "atse"
        assert payload["config"]["n_trees"] == 12
        assert "tune" not in payload

    def test_tuning(self, drop_dataset, small_config):
        """Test tuning picks a searched configuration and keeps the log."""
        method = AdaptiveMethod(
            small_config,
            tune_trials=3,
            tune_seed=2,
            intervals=TINY_INTERVALS,
            tune_range=(25, 40),
        )
        assert method.first_step is None
        trace = method.run(drop_dataset)
        assert len(method.trials) == 3
        assert method.last_config is not None
        assert 3 <= method.last_config.n_trees <= 4
        assert method.config == small_config
        assert len(trace) == len(drop_dataset) - method.last_config.first_step
        payload = method.describe()
        assert payload["tune"] == {"trials": 3, "seed": 2}
        assert payload["tuned_config"]["n_trees"] == method.last_config.n_trees


class TestLinearMethods:
    """Tests for LassoMethod and ElasticNetMethod."""

    def test_kind_follows_method(self):
        """Test the method name fixes the baseline kind."""
        assert LassoMethod(BaselineConfig(kind="enet")).config.kind == "lasso"
        assert ElasticNetMethod(BaselineConfig()).config.kind == "enet"
        assert ElasticNetMethod.name == "enet"

    def test_run(self, drop_dataset):
        """Test a lasso run through the method interface."""
        method = LassoMethod(create_small_baseline())
        trace = method.run(drop_dataset, series="drop")
        assert trace.method == "lasso"
        assert trace.first_step == method.first_step == 25

    def test_describe(self):
        """Test the description names the method."""
        payload = ElasticNetMethod(create_small_baseline(kind="enet")).describe()
        assert payload["name"] == "enet"
        assert payload["config"]["alphas"] == [0.5, 0.9]
