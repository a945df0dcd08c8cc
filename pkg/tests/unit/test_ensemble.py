"""Tests for the windowed tree experts."""

import numpy as np
import pytest

from nowcast_core.features.featurization import FeatureView, schema_for
from nowcast_core.models.features import FeatureSchema
from nowcast_core.models.timeseries import Dataset
from nowcast_core.trees.ensemble import (
    ExpertPool,
    TreeSpec,
    expert_seed,
    init_specs,
    retrain,
    window_sample,
)
from nowcast_core.utils.exceptions import (
    InsufficientHistoryError,
    ParameterError,
    ProtocolError,
)


def _view(ds: Dataset, n_lags: int = 2, terms=(0,), t_end=None) -> FeatureView:
    return FeatureView.from_dataset(ds, schema_for(ds, n_lags, list(terms)), t_end=t_end)


class TestInitSpecs:
    """Tests for init_specs."""

    def test_fixed_window_single_feature(self):
        """Test a degenerate interval and single feature fix every expert."""
        specs = init_specs(n_features=1, n_trees=3, window_interval=(5, 5))
        assert {s.window for s in specs} == {5}
        assert {s.feature_multiset for s in specs} == {(0,)}

    def test_multiset_and_window_ranges(self):
        """Test multisets have length F and windows stay in the interval."""
        specs = init_specs(n_features=4, n_trees=50, window_interval=(1, 46), master_seed=2)
        for spec in specs:
            assert len(spec.feature_multiset) == 4
            assert all(0 <= f < 4 for f in spec.feature_multiset)
            assert 1 <= spec.window <= 46

    def test_distinct_feature_fraction(self):
        """Test multisets drawn with replacement cover about 1 - (1 - 1/F)^F of the features."""
        specs = init_specs(n_features=10, n_trees=1000, window_interval=(1, 46), master_seed=0)
        fractions = [len(set(s.feature_multiset)) / 10 for s in specs]
        expected = 1.0 - (1.0 - 1.0 / 10) ** 10
        assert np.mean(fractions) == pytest.approx(expected, abs=0.02)

    def test_deterministic(self):
        """Test the same master seed draws the same population."""
        a = init_specs(3, 20, (1, 10), master_seed=9)
        b = init_specs(3, 20, (1, 10), master_seed=9)
        c = init_specs(3, 20, (1, 10), master_seed=10)
        assert a == b
        assert a != c

    def test_expert_seeds_are_distinct(self):
        """Test every expert gets its own seed."""
        specs = init_specs(2, 30, (1, 5), master_seed=1)
        assert len({s.seed for s in specs}) == 30
        assert specs[7].seed == expert_seed(1, 7)

    @pytest.mark.parametrize(
        "n_features,n_trees,interval",
        [(0, 5, (1, 2)), (3, 0, (1, 2)), (3, 5, (4, 2)), (3, 5, (-1, 2))],
    )
    def test_invalid_arguments(self, n_features, n_trees, interval):
        """Test invalid sizes and intervals raise ParameterError."""
        with pytest.raises(ParameterError):
            init_specs(n_features, n_trees, interval)


class TestWindowSample:
    """Tests for window_sample."""

    def test_zero_window_uses_last_observation(self):
        """Test a window of 0 trains on t - 1 only."""
        steps = window_sample(TreeSpec((0,), window=0, seed=1), t=7)
        assert steps.tolist() == [6]

    def test_steps_stay_inside_window(self):
        """Test drawn steps lie in [t - 1 - s, t - 1] and B = s + 1."""
        spec = TreeSpec((0,), window=5, seed=3)
        steps = window_sample(spec, t=30)
        assert steps.shape == (6,)
        assert steps.min() >= 24 and steps.max() <= 29

    def test_window_truncated_by_history(self):
        """Test large windows are cut to the available history."""
        spec = TreeSpec((0,), window=40, seed=3)
        steps = window_sample(spec, t=10, min_step=2)
        assert steps.shape == (10,)
        assert steps.min() >= 2 and steps.max() <= 9

    @pytest.mark.parametrize(
        "window,t,min_step,lowest",
        [(10, 5, 2, 2), (46, 25, 20, 20), (3, 30, 2, 26)],
    )
    def test_sample_size_ignores_lag_floor(self, window, t, min_step, lowest):
        """Test B = min(s, t - 1) + 1 draws even when lags hide early steps."""
        spec = TreeSpec((0,), window=window, seed=5)
        steps = window_sample(spec, t=t, min_step=min_step)
        assert steps.shape == (min(window, t - 1) + 1,)
        assert steps.min() >= lowest and steps.max() <= t - 1

    def test_never_reads_current_step(self):
        """Test the step being predicted is never drawn."""
        spec = TreeSpec((0,), window=3, seed=11)
        for t in range(5, 40):
            assert window_sample(spec, t).max() < t

    def test_reproducible_per_step(self):
        """Test the draw is a function of (seed, t)."""
        spec = TreeSpec((0,), window=10, seed=42)
        assert window_sample(spec, 20).tolist() == window_sample(spec, 20).tolist()

    def test_no_history(self):
        """Test an empty range raises InsufficientHistoryError."""
        with pytest.raises(InsufficientHistoryError):
            window_sample(TreeSpec((0,), window=3, seed=1), t=2, min_step=2)


class TestExpertPool:
    """Tests for ExpertPool and retrain."""

    def test_predict_requires_fit(self):
        """Test predicting with an unfitted pool raises ProtocolError."""
        pool = ExpertPool(init_specs(2, 3, (1, 4)))
        with pytest.raises(ProtocolError):
            pool.predict([1.0, 2.0])

    def test_retrain_shares_specs(self, drop_dataset):
        """Test retraining keeps specs and records the step."""
        view = _view(drop_dataset, t_end=30)
        pool = ExpertPool(init_specs(view.n_features, 6, (1, 10), master_seed=4))
        fitted = retrain(pool, view, t=30)
        assert fitted.specs == pool.specs
        assert fitted.fitted_at == 30
        assert fitted.spec_digest() == pool.spec_digest()
        assert fitted.predict(view.pending_row([50.0])).shape == (6,)

    def test_retrain_ignores_future_rows(self, drop_dataset):
        """Test fits at t only depend on steps before t."""
        short = _view(drop_dataset, t_end=30)
        full = _view(drop_dataset)
        pool = ExpertPool(init_specs(short.n_features, 8, (1, 20), master_seed=6))
        x = short.pending_row([40.0])
        a = retrain(pool, short, t=30).predict(x)
        b = retrain(pool, full, t=30).predict(x)
        np.testing.assert_array_equal(a, b)

    def test_parallel_matches_sequential(self, drop_dataset):
        """Test n_jobs does not change the fits."""
        view = _view(drop_dataset, t_end=40)
        pool = ExpertPool(init_specs(view.n_features, 10, (1, 30), master_seed=8))
        x = view.pending_row([60.0])
        sequential = retrain(pool, view, t=40, n_jobs=1).predict(x)
        parallel = retrain(pool, view, t=40, n_jobs=3).predict(x)
        np.testing.assert_array_equal(sequential, parallel)

    def test_retrain_needs_history(self, drop_dataset):
        """Test t must leave a row with complete lags."""
        view = _view(drop_dataset, n_lags=2, t_end=10)
        pool = ExpertPool(init_specs(view.n_features, 2, (1, 3)))
        with pytest.raises(InsufficientHistoryError):
            retrain(pool, view, t=2)
        with pytest.raises(InsufficientHistoryError):
            retrain(pool, view, t=11)

    def test_constant_history_predicts_constant(self, constant_dataset):
        """Test every expert predicts the constant level."""
        view = FeatureView.from_dataset(constant_dataset, FeatureSchema(n_lags=1), t_end=20)
        pool = retrain(ExpertPool(init_specs(1, 5, (1, 10))), view, t=20)
        assert set(pool.predict(view.pending_row([])).tolist()) == {75.0}

    def test_empty_pool(self):
        """Test a pool needs at least one spec."""
        with pytest.raises(ParameterError):
            ExpertPool([])
