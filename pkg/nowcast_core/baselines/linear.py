"""
Lasso and elastic-net regression by cyclic coordinate descent.

Objective, on z-scored features and centered target::

    (1 / 2m) * ||y - Z b||^2 + lam * (alpha * ||b||_1 + (1 - alpha) / 2 * ||b||_2^2)

Features are standardized with the population standard deviation so every
column satisfies ``z_j . z_j / m == 1`` and the coordinate update reduces to
``b_j = S(rho_j, lam * alpha) / (1 + lam * (1 - alpha))``. Zero-variance
columns are excluded and get coefficient 0.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from nowcast_core.models.config import EnetHyper
from nowcast_core.utils.exceptions import ParameterError, ShapeError
from nowcast_core.utils.logging import get_logger

logger = get_logger(__name__)

Array = npt.NDArray[np.float64]


def soft_threshold(z: float, gamma: float) -> float:
    """
    ``sign(z) * max(|z| - gamma, 0)``.

    Example:
        >>> soft_threshold(-3.0, 1.0)
        -2.0
    """
    if gamma < 0:
        raise ParameterError("gamma must be non-negative", details={"gamma": gamma})
    if z > gamma:
        return z - gamma
    if z < -gamma:
        return z + gamma
    return 0.0


def enet_objective(Z: Array, y: Array, beta: Array, hyper: EnetHyper) -> float:
    """Elastic-net objective of ``beta`` on standardized ``Z`` and centered ``y``."""
    m = y.shape[0]
    r = y - Z @ beta
    penalty = hyper.alpha * np.abs(beta).sum() + 0.5 * (1.0 - hyper.alpha) * np.dot(beta, beta)
    return float(np.dot(r, r) / (2.0 * m) + hyper.lam * penalty)


@dataclass
class Standardizer:
    """Per-feature mean and population standard deviation of training rows."""

    means: Array
    scales: Array

    @classmethod
    def fit(cls, X: Array) -> "Standardizer":
        return cls(means=X.mean(axis=0), scales=X.std(axis=0))

    @property
    def active(self) -> npt.NDArray[np.bool_]:
        """Columns with non-zero variance."""
        return self.scales > 0

    def transform(self, X: Array) -> Array:
        keep = self.active
        return (X[:, keep] - self.means[keep]) / self.scales[keep]


@dataclass
class LinearModel:
    """
    Fitted linear model on the raw feature scale.

    Attributes:
        coefficients: One coefficient per feature (0 for zero-variance features)
        intercept: Intercept on the raw scale
        means: Training feature means
        scales: Training feature standard deviations
        hyper: Penalty the model was fitted with
        n_iter: Coordinate-descent sweeps performed
        converged: Whether the coefficient change fell below ``tol``
        objective_history: Objective after every sweep
    """

    coefficients: Array
    intercept: float
    means: Array
    scales: Array
    hyper: EnetHyper
    n_iter: int = 0
    converged: bool = True
    objective_history: List[float] = field(default_factory=list)

    @property
    def n_features(self) -> int:
        return int(self.coefficients.shape[0])

    def predict(self, X: npt.ArrayLike) -> Array:
        """
        Predictions for one row or a matrix of rows.

        Raises:
            ShapeError: If the row width differs from the training width
        """
        arr = np.asarray(X, dtype=np.float64)
        rows = arr.reshape(1, -1) if arr.ndim == 1 else arr
        if rows.shape[1] != self.n_features:
            raise ShapeError(
                "feature width differs from training width",
                details={"expected": self.n_features, "actual": int(rows.shape[1])},
            )
        return rows @ self.coefficients + self.intercept

    def predict_one(self, x: npt.ArrayLike) -> float:
        return float(self.predict(x)[0])


def _as_design(X: npt.ArrayLike, y: npt.ArrayLike) -> Tuple[Array, Array]:
    y_arr = np.asarray(y, dtype=np.float64).reshape(-1)
    m = y_arr.shape[0]
    X_arr = np.asarray(X, dtype=np.float64)
    if X_arr.size == 0:
        X_arr = np.empty((m, X_arr.shape[1] if X_arr.ndim == 2 else 0), dtype=np.float64)
    if X_arr.ndim != 2 or X_arr.shape[0] != m:
        raise ShapeError(
            "X and y sizes disagree",
            details={"x_shape": list(X_arr.shape), "y_length": m},
        )
    return X_arr, y_arr


def lambda_max(X: npt.ArrayLike, y: npt.ArrayLike, alpha: float = 1.0) -> float:
    """
    Smallest penalty at which every coefficient is exactly zero.

    ``max_j |z_j . (y - mean(y))| / (m * alpha)``; infinite for ``alpha == 0``.
    """
    X_arr, y_arr = _as_design(X, y)
    Z = Standardizer.fit(X_arr).transform(X_arr)
    if Z.shape[1] == 0:
        return 0.0
    if alpha == 0:
        return float("inf")
    yc = y_arr - y_arr.mean()
    return float(np.abs(Z.T @ yc).max() / (y_arr.shape[0] * alpha))


def _coordinate_descent(
    Z: Array, y: Array, hyper: EnetHyper, tol: float, max_iter: int
) -> Tuple[Array, int, bool, List[float]]:
    """
    Cyclic coordinate descent with active-set sweeps.

    After each full sweep the nonzero coordinates are iterated until they
    settle; a full sweep then either confirms convergence or reopens the
    active set.
    """
    m, p = Z.shape
    beta = np.zeros(p, dtype=np.float64)
    history: List[float] = []
    if p == 0:
        return beta, 0, True, history

    gamma = hyper.lam * hyper.alpha
    denom = 1.0 + hyper.lam * (1.0 - hyper.alpha)
    r = y.copy()
    sweeps = 0

    def sweep(coords: Sequence[int]) -> float:
        nonlocal r
        max_delta = 0.0
        for j in coords:
            old = beta[j]
            rho = float(np.dot(Z[:, j], r)) / m + old
            new = soft_threshold(rho, gamma) / denom
            if new != old:
                r -= Z[:, j] * (new - old)
                beta[j] = new
                max_delta = max(max_delta, abs(new - old))
        return max_delta

    everything = range(p)
    while sweeps < max_iter:
        delta = sweep(everything)
        sweeps += 1
        history.append(enet_objective(Z, y, beta, hyper))
        if delta < tol:
            return beta, sweeps, True, history
        active = np.flatnonzero(beta)
        while sweeps < max_iter:
            delta = sweep(active)
            sweeps += 1
            history.append(enet_objective(Z, y, beta, hyper))
            if delta < tol:
                break
    return beta, sweeps, False, history


def fit_enet(
    X: npt.ArrayLike,
    y: npt.ArrayLike,
    hyper: EnetHyper,
    tol: float = 1e-8,
    max_iter: int = 10_000,
) -> LinearModel:
    """
    Fit an elastic net (``alpha == 1`` is the lasso).

    Non-convergence within ``max_iter`` sweeps is reported on the model and
    logged, never raised.

    Raises:
        ParameterError: If fewer than two training rows are given

    Example:
        >>> model = fit_enet(X, y, EnetHyper(lam=0.1, alpha=0.5))
        >>> model.predict(X[:1])
    """
    X_arr, y_arr = _as_design(X, y)
    m = y_arr.shape[0]
    if m < 2:
        raise ParameterError("elastic net needs at least two training rows", details={"m": m})

    scaler = Standardizer.fit(X_arr)
    Z = scaler.transform(X_arr)
    y_mean = float(y_arr.mean())
    beta_std, n_iter, converged, history = _coordinate_descent(
        Z, y_arr - y_mean, hyper, tol, max_iter
    )
    if not converged:
        logger.warning(
            "coordinate_descent_not_converged",
            lam=hyper.lam,
            alpha=hyper.alpha,
            sweeps=n_iter,
        )

    coefficients = np.zeros(X_arr.shape[1], dtype=np.float64)
    keep = scaler.active
    coefficients[keep] = beta_std / scaler.scales[keep]
    intercept = y_mean - float(np.dot(coefficients, scaler.means))
    return LinearModel(
        coefficients=coefficients,
        intercept=intercept,
        means=scaler.means,
        scales=scaler.scales,
        hyper=hyper,
        n_iter=n_iter,
        converged=converged,
        objective_history=history,
    )


def contiguous_folds(m: int, k: int) -> List[npt.NDArray[np.intp]]:
    """Row indices of ``k`` contiguous, unshuffled blocks in time order."""
    return [np.asarray(block, dtype=np.intp) for block in np.array_split(np.arange(m), k)]


def cv_scores(
    X: npt.ArrayLike,
    y: npt.ArrayLike,
    grid: Sequence[EnetHyper],
    k: int = 3,
    tol: float = 1e-8,
    max_iter: int = 10_000,
) -> Array:
    """
    Mean validation MSE over ``k`` contiguous folds for every grid element.

    Raises:
        ParameterError: If the grid is empty or there are fewer rows than
            ``max(k, 3)``
    """
    X_arr, y_arr = _as_design(X, y)
    m = y_arr.shape[0]
    if not grid:
        raise ParameterError("hyperparameter grid is empty")
    if k < 2 or m < max(k, 3):
        raise ParameterError(
            "not enough rows for cross-validation", details={"rows": m, "folds": k}
        )

    folds = contiguous_folds(m, k)
    scores = np.zeros(len(grid), dtype=np.float64)
    for held_out in folds:
        train = np.setdiff1d(np.arange(m), held_out, assume_unique=True)
        for g, hyper in enumerate(grid):
            model = fit_enet(X_arr[train], y_arr[train], hyper, tol=tol, max_iter=max_iter)
            err = model.predict(X_arr[held_out]) - y_arr[held_out]
            scores[g] += float(np.mean(err * err))
    return scores / k


def cv_select(
    X: npt.ArrayLike,
    y: npt.ArrayLike,
    grid: Sequence[EnetHyper],
    k: int = 3,
    tol: float = 1e-8,
    max_iter: int = 10_000,
) -> EnetHyper:
    """
    Grid element with the lowest mean ``k``-fold validation MSE.

    Ties go to the smaller ``lam``, then the larger ``alpha``, then the
    earlier grid position.

    Raises:
        ParameterError: If the grid is empty or rows are too few

    Example:
        >>> cv_select(X, y, [EnetHyper(lam=0.01), EnetHyper(lam=1.0)])
        EnetHyper(lam=0.01, alpha=1.0)
    """
    if len(grid) == 1:
        return grid[0]
    scores = cv_scores(X, y, grid, k=k, tol=tol, max_iter=max_iter)
    best = min(
        range(len(grid)),
        key=lambda g: (scores[g], grid[g].lam, -grid[g].alpha, g),
    )
    logger.debug(
        "cv_selected",
        lam=grid[best].lam,
        alpha=grid[best].alpha,
        mse=float(scores[best]),
        grid=len(grid),
    )
    return grid[best]


def fit_selected(
    X: npt.ArrayLike,
    y: npt.ArrayLike,
    grid: Sequence[EnetHyper],
    k: int = 3,
    tol: float = 1e-8,
    max_iter: int = 10_000,
    hyper: Optional[EnetHyper] = None,
) -> LinearModel:
    """Select by cross-validation (unless ``hyper`` is fixed) and refit on all rows."""
    chosen = hyper if hyper is not None else cv_select(X, y, grid, k=k, tol=tol, max_iter=max_iter)
    return fit_enet(X, y, chosen, tol=tol, max_iter=max_iter)
