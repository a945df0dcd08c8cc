"""Tests for lasso and elastic-net coordinate descent."""

import numpy as np
import pytest

from nowcast_core.baselines.linear import (
    contiguous_folds,
    cv_scores,
    cv_select,
    fit_enet,
    fit_selected,
    lambda_max,
    soft_threshold,
)
from nowcast_core.models.config import EnetHyper
from nowcast_core.utils.exceptions import ParameterError, ShapeError


def _orthonormal_design(m: int = 40, p: int = 3, seed: int = 0):
    """Columns with zero mean and z.z / m == 1, mutually orthogonal."""
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.normal(size=(m, p + 1)))
    centered = q[:, 1:] - q[:, 1:].mean(axis=0)
    q2, _ = np.linalg.qr(np.column_stack([np.ones(m), centered]))
    Z = q2[:, 1:] * np.sqrt(m)
    return Z


class TestSoftThreshold:
    """Tests for soft_threshold."""

    @pytest.mark.parametrize(
        "z,gamma,expected", [(3.0, 1.0, 2.0), (-3.0, 1.0, -2.0), (0.5, 1.0, 0.0), (1.0, 0.0, 1.0)]
    )
    def test_values(self, z, gamma, expected):
        """Test shrinkage toward zero."""
        assert soft_threshold(z, gamma) == expected

    def test_negative_gamma(self):
        """Test gamma < 0 raises ParameterError."""
        with pytest.raises(ParameterError):
            soft_threshold(1.0, -0.1)


class TestFitEnet:
    """Tests for fit_enet."""

    def test_orthonormal_closed_form(self):
        """Test lasso on an orthonormal design equals soft-thresholded OLS."""
        m = 40
        Z = _orthonormal_design(m)
        beta = np.array([2.0, -0.3, 0.0])
        y = Z @ beta + 5.0
        lam = 0.5
        model = fit_enet(Z, y, EnetHyper(lam=lam, alpha=1.0))
        scales = Z.std(axis=0)
        ols = Z.T @ (y - y.mean()) / m
        expected = np.array([soft_threshold(b, lam) for b in ols]) / scales
        np.testing.assert_allclose(model.coefficients, expected, atol=1e-8)
        assert model.converged

    def test_ridge_limit_closed_form(self):
        """Test alpha = 0 shrinks each orthonormal coefficient by 1 / (1 + lam)."""
        m = 40
        Z = _orthonormal_design(m, seed=1)
        y = Z @ np.array([1.0, 2.0, -1.0])
        lam = 0.25
        model = fit_enet(Z, y, EnetHyper(lam=lam, alpha=0.0))
        scales = Z.std(axis=0)
        ols = Z.T @ (y - y.mean()) / m
        np.testing.assert_allclose(model.coefficients, ols / (1.0 + lam) / scales, atol=1e-8)

    def test_lambda_max_zeroes_everything(self):
        """Test lam >= lambda_max gives all-zero coefficients and a mean prediction."""
        rng = np.random.default_rng(2)
        X = rng.normal(size=(30, 4))
        y = X @ np.array([1.0, 0.0, -2.0, 0.5]) + rng.normal(size=30)
        lam = lambda_max(X, y)
        model = fit_enet(X, y, EnetHyper(lam=lam * 1.0001))
        assert np.all(model.coefficients == 0.0)
        assert model.predict_one(X[0]) == pytest.approx(y.mean())
        below = fit_enet(X, y, EnetHyper(lam=lam * 0.9))
        assert np.any(below.coefficients != 0.0)

    def test_lasso_path_satisfies_optimality(self):
        """Test alpha = 1 fits meet the lasso optimality conditions along a path."""
        rng = np.random.default_rng(7)
        X = rng.normal(size=(60, 5))
        X[:, 1] = X[:, 0] + rng.normal(scale=0.3, size=60)
        y = X @ np.array([2.0, 0.0, -1.0, 0.0, 0.5]) + rng.normal(scale=0.5, size=60)
        top = lambda_max(X, y)
        for fraction in (0.9, 0.5, 0.2, 0.05):
            lam = top * fraction
            model = fit_enet(X, y, EnetHyper(lam=lam, alpha=1.0), tol=1e-12)
            Z = (X - X.mean(axis=0)) / X.std(axis=0)
            beta = model.coefficients * X.std(axis=0)
            gradient = Z.T @ (y - y.mean() - Z @ beta) / len(y)
            active = beta != 0.0
            np.testing.assert_allclose(gradient[active], lam * np.sign(beta[active]), atol=1e-6)
            assert np.all(np.abs(gradient[~active]) <= lam + 1e-6)
            n_active = int(active.sum())
        assert n_active >= 3

    def test_zero_penalty_matches_least_squares(self):
        """Test lam = 0 recovers ordinary least squares."""
        rng = np.random.default_rng(3)
        X = rng.normal(size=(50, 3))
        y = X @ np.array([1.5, -0.5, 2.0]) + 3.0 + rng.normal(scale=0.1, size=50)
        model = fit_enet(X, y, EnetHyper(lam=0.0), tol=1e-12)
        design = np.column_stack([np.ones(50), X])
        ols, *_ = np.linalg.lstsq(design, y, rcond=None)
        np.testing.assert_allclose(model.coefficients, ols[1:], atol=1e-6)
        assert model.intercept == pytest.approx(ols[0], abs=1e-6)

    def test_objective_non_increasing(self):
        """Test every sweep lowers or keeps the objective."""
        rng = np.random.default_rng(4)
        X = rng.normal(size=(40, 6))
        X[:, 1] = X[:, 0] + rng.normal(scale=0.05, size=40)
        y = X[:, 0] - X[:, 2] + rng.normal(size=40)
        model = fit_enet(X, y, EnetHyper(lam=0.05, alpha=0.7))
        history = np.array(model.objective_history)
        assert len(history) >= 1
        assert np.all(np.diff(history) <= 1e-12)

    def test_zero_variance_column(self):
        """Test constant columns get coefficient 0."""
        rng = np.random.default_rng(5)
        X = np.column_stack([rng.normal(size=20), np.full(20, 7.0)])
        y = 2.0 * X[:, 0] + 1.0
        model = fit_enet(X, y, EnetHyper(lam=0.0))
        assert model.coefficients[1] == 0.0
        assert model.coefficients[0] == pytest.approx(2.0, abs=1e-6)

    def test_no_features_predicts_mean(self):
        """Test an empty design predicts the training mean."""
        model = fit_enet(np.empty((4, 0)), [1.0, 2.0, 3.0, 4.0], EnetHyper(lam=0.1))
        assert model.predict_one([]) == 2.5

    def test_needs_two_rows(self):
        """Test a single row raises ParameterError."""
        with pytest.raises(ParameterError):
            fit_enet([[1.0]], [1.0], EnetHyper(lam=0.1))

    def test_iteration_cap_reported(self):
        """Test non-convergence is reported, not raised."""
        rng = np.random.default_rng(6)
        X = rng.normal(size=(30, 5))
        X[:, 1] = X[:, 0] + rng.normal(scale=1e-3, size=30)
        y = X @ np.ones(5)
        model = fit_enet(X, y, EnetHyper(lam=1e-4), tol=1e-15, max_iter=2)
        assert model.n_iter == 2
        assert not model.converged

    def test_predict_width(self):
        """Test predicting with the wrong width raises ShapeError."""
        model = fit_enet([[0.0], [1.0], [2.0]], [0.0, 1.0, 2.0], EnetHyper(lam=0.0))
        with pytest.raises(ShapeError):
            model.predict([[1.0, 2.0]])


class TestCrossValidation:
    """Tests for fold construction and selection."""

    def test_folds_are_contiguous(self):
        """Test folds are unshuffled blocks covering every row."""
        folds = contiguous_folds(10, 3)
        assert [f.tolist() for f in folds] == [[0, 1, 2, 3], [4, 5, 6], [7, 8, 9]]

    def test_prefers_small_penalty_on_clean_signal(self):
        """Test a near-noiseless linear target selects the smallest penalty."""
        rng = np.random.default_rng(7)
        X = rng.normal(size=(45, 2))
        y = 3.0 * X[:, 0] + rng.normal(scale=0.01, size=45)
        grid = [EnetHyper(lam=lam) for lam in (0.001, 1.0, 10.0)]
        assert cv_select(X, y, grid) == grid[0]

    def test_ties_prefer_smaller_penalty(self):
        """Test equal scores resolve to the smaller lambda."""
        rng = np.random.default_rng(8)
        X = rng.normal(size=(30, 2))
        y = rng.normal(size=30)
        grid = [EnetHyper(lam=2e6), EnetHyper(lam=1e6)]
        assert cv_select(X, y, grid) == grid[1]

    def test_single_element_grid(self):
        """Test a one-element grid is returned without fitting."""
        grid = [EnetHyper(lam=0.3, alpha=0.5)]
        assert cv_select(np.zeros((2, 1)), [0.0, 1.0], grid) == grid[0]

    def test_too_few_rows(self):
        """Test fewer rows than folds raises ParameterError."""
        grid = [EnetHyper(lam=0.1), EnetHyper(lam=1.0)]
        with pytest.raises(ParameterError):
            cv_scores(np.zeros((2, 1)), [0.0, 1.0], grid, k=3)

    def test_fit_selected_fixed_hyper(self):
        """Test a fixed penalty bypasses selection."""
        rng = np.random.default_rng(9)
        X = rng.normal(size=(20, 2))
        y = X[:, 0]
        hyper = EnetHyper(lam=0.2, alpha=0.5)
        model = fit_selected(X, y, [EnetHyper(lam=5.0)], hyper=hyper)
        assert model.hyper == hyper
