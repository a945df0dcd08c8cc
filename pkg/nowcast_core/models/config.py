"""
Configuration models for nowcast-core.

Defines the hyperparameter and settings structures for the estimators, the
linear baselines, the random parameter search and the command-line front end.
Domain configs are frozen and reject unknown keys.
"""

from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# Protocol constants.
DEFAULT_WARMUP = 24
DEFAULT_TRIALS = 100
DEFAULT_CV_FOLDS = 3
DEFAULT_ALPHA_GRID: Tuple[float, ...] = (0.1, 0.3, 0.5, 0.7, 0.9)
DEFAULT_LAMBDA_RANGE: Tuple[float, float] = (1e-4, 1e2)
DEFAULT_LAMBDA_POINTS = 50


def default_lambda_grid(
    n_points: int = DEFAULT_LAMBDA_POINTS,
    lo: float = DEFAULT_LAMBDA_RANGE[0],
    hi: float = DEFAULT_LAMBDA_RANGE[1],
) -> Tuple[float, ...]:
    """Log-spaced penalty grid over ``[lo, hi]``."""
    return tuple(float(x) for x in np.logspace(np.log10(lo), np.log10(hi), n_points))


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class TreeParams(_Frozen):
    """
    Regression tree growth limits.

    Defaults grow full trees; variance is handled by the ensemble.

    Attributes:
        max_depth: Maximum depth (None for unbounded)
        min_samples_leaf: Minimum samples in each child of a split
        min_impurity_decrease: A split must reduce SSE by more than this
    """

    max_depth: Optional[int] = Field(default=None, ge=0, description="Depth limit")
    min_samples_leaf: int = Field(default=1, ge=1, description="Minimum samples per leaf")
    min_impurity_decrease: float = Field(default=0.0, ge=0.0, description="Minimum SSE gain")


class EstimatorConfig(_Frozen):
    """
    Adaptive estimator hyperparameters.

    Attributes:
        eta: Learning rate of the exponential weight update
        n_trees: Number of tree experts
        warmup: Initial observations consumed before the first prediction
        window_interval: Interval the per-tree window sizes are drawn from
        n_lags: Number of lagged-uptake features
        n_web: Number of query-term features
        tree_params: Tree growth limits
        master_seed: Seed for expert construction and window sampling

    Example:
        >>> cfg = EstimatorConfig(eta=0.05, n_trees=500, n_lags=3, n_web=5)
    """

    eta: float = Field(default=0.05, ge=0.0, description="Learning rate")
    n_trees: int = Field(default=500, ge=1, description="Number of experts")
    warmup: int = Field(default=DEFAULT_WARMUP, ge=1, description="Warmup observations")
    window_interval: Tuple[int, int] = Field(default=(1, 46), description="Window size interval")
    n_lags: int = Field(default=2, ge=0, description="Lagged-uptake features")
    n_web: int = Field(default=1, ge=0, description="Query-term features")
    tree_params: TreeParams = Field(default_factory=TreeParams, description="Tree limits")
    master_seed: int = Field(default=0, ge=0, description="Master seed")

    @field_validator("window_interval")
    @classmethod
    def window_ordered(cls, v: Tuple[int, int]) -> Tuple[int, int]:
        """Window interval must satisfy 0 <= lo <= hi."""
        lo, hi = v
        if lo < 0 or lo > hi:
            raise ValueError(f"window_interval must satisfy 0 <= lo <= hi, got {v}")
        return v

    @property
    def n_features(self) -> int:
        return self.n_lags + self.n_web

    @property
    def first_step(self) -> int:
        """First predicted step: lags never outrun history."""
        return max(self.warmup, self.n_lags) + 1


class EnetHyper(_Frozen):
    """
    Elastic-net penalty.

    Attributes:
        lam: Overall penalty strength (lambda)
        alpha: L1 mixing, 1.0 is the lasso
    """

    lam: float = Field(..., ge=0.0, description="Penalty strength")
    alpha: float = Field(default=1.0, ge=0.0, le=1.0, description="L1 mixing")


class BaselineConfig(_Frozen):
    """
    Linear baseline settings.

    Attributes:
        kind: ``lasso`` or ``enet``
        n_lags: Lagged-uptake features
        n_web: Query-term features (None for every panel term, capped at 30)
        warmup: Initial observations before the first prediction
        cv: Select the penalty by cross-validation at every step
        hyper: Fixed penalty used when ``cv`` is off
        lambdas: Penalty grid
        alphas: Mixing grid for ``enet`` (``lasso`` always uses 1.0)
        folds: Cross-validation folds
        tol: Coordinate-descent tolerance
        max_iter: Coordinate-descent sweep limit
    """

    kind: Literal["lasso", "enet"] = "lasso"
    n_lags: int = Field(default=0, ge=0)
    n_web: Optional[int] = Field(default=None, ge=0)
    warmup: int = Field(default=DEFAULT_WARMUP, ge=1)
    cv: bool = True
    hyper: Optional[EnetHyper] = None
    lambdas: Tuple[float, ...] = Field(default_factory=default_lambda_grid)
    alphas: Tuple[float, ...] = DEFAULT_ALPHA_GRID
    folds: int = Field(default=DEFAULT_CV_FOLDS, ge=2)
    tol: float = Field(default=1e-8, gt=0.0)
    max_iter: int = Field(default=10_000, ge=1)

    @model_validator(mode="after")
    def check_hyper(self) -> "BaselineConfig":
        """A fixed penalty is required when cross-validation is off."""
        if not self.cv and self.hyper is None:
            raise ValueError("hyper is required when cv is false")
        if self.cv and not self.lambdas:
            raise ValueError("lambdas must not be empty")
        return self

    def grid(self) -> List[EnetHyper]:
        """Hyperparameter grid in evaluation order."""
        alphas = (1.0,) if self.kind == "lasso" else self.alphas
        return [EnetHyper(lam=lam, alpha=a) for a in alphas for lam in self.lambdas]


class SearchIntervals(_Frozen):
    """
    Random-search intervals (inclusive).

    Defaults are the published protocol: window 1-46, lag features 0-45,
    web features 0-30, trees 500-10000, eta 0.001-0.25.
    """

    window: Tuple[int, int] = (1, 46)
    n_lags: Tuple[int, int] = (0, 45)
    n_web: Tuple[int, int] = (0, 30)
    n_trees: Tuple[int, int] = (500, 10_000)
    eta: Tuple[float, float] = (0.001, 0.25)

    @model_validator(mode="after")
    def check_ordered(self) -> "SearchIntervals":
        """Every interval must satisfy lo <= hi."""
        for name in ("window", "n_lags", "n_web", "n_trees", "eta"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} interval is empty: ({lo}, {hi})")
            if lo < 0:
                raise ValueError(f"{name} interval must be non-negative")
        if self.n_trees[0] < 1:
            raise ValueError("n_trees interval must start at 1 or more")
        return self


class NowcastSettings(BaseModel):
    """
    Process-level settings, overridable from the environment.

    Attributes:
        log_level: Logging level
        log_format: ``text`` or ``json``
        warmup: Default warmup for commands
        seed: Default seed
        n_jobs: Worker threads for retraining and trials
    """

    model_config = ConfigDict(extra="forbid")

    log_level: str = Field(default="INFO", description="Log level")
    log_format: str = Field(default="text", description="Log format")
    warmup: int = Field(default=DEFAULT_WARMUP, ge=1, description="Default warmup")
    seed: int = Field(default=0, ge=0, description="Default seed")
    n_jobs: int = Field(default=1, ge=1, description="Worker threads")

    @field_validator("log_level")
    @classmethod
    def log_level_uppercase(cls, v: str) -> str:
        """Convert log level to uppercase."""
        return v.upper()

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v: str) -> str:
        """Validate log format."""
        if v.lower() not in ["json", "text"]:
            raise ValueError("log_format must be 'json' or 'text'")
        return v.lower()


class MethodSpec(_Frozen):
    """
    One method column of a comparison.

    Attributes:
        method: Registry name (``atse``, ``lasso``, ``enet`` or a plugin)
        label: Column label (defaults to ``method``)
        config: Keyword configuration for the method
        tune_trials: Random-search trials before the run (``atse`` only)
        tune_seed: Seed of the search
        intervals: Search intervals (published defaults when omitted)
    """

    method: str
    label: Optional[str] = None
    config: Dict[str, Any] = Field(default_factory=dict)
    tune_trials: int = Field(default=0, ge=0)
    tune_seed: int = Field(default=0, ge=0)
    intervals: Optional[SearchIntervals] = None

    @property
    def display(self) -> str:
        return self.label or self.method


class SeriesSpec(_Frozen):
    """
    One dataset of a comparison: a synthetic preset or a pair of CSV files.

    Relative paths are resolved against the comparison document's directory.
    """

    name: str
    preset: Optional[str] = None
    seed: int = Field(default=0, ge=0)
    uptake: Optional[str] = None
    queries: Optional[str] = None

    @model_validator(mode="after")
    def check_source(self) -> "SeriesSpec":
        """Exactly one source: a preset, or both CSV paths."""
        has_files = self.uptake is not None and self.queries is not None
        if (self.preset is None) == (not has_files):
            raise ValueError(f"series '{self.name}' needs either a preset or uptake+queries")
        return self


class CompareSpec(_Frozen):
    """
    Comparison document read by ``nowcast compare --spec``.

    Example:
        >>> CompareSpec(
        ...     series=[SeriesSpec(name="drop", preset="regime_drop", seed=1)],
        ...     methods=[MethodSpec(method="atse"), MethodSpec(method="lasso")],
        ... )
    """

    warmup: int = Field(default=DEFAULT_WARMUP, ge=1)
    score_from: Optional[int] = Field(default=None, ge=0)
    series: List[SeriesSpec] = Field(..., min_length=1)
    methods: List[MethodSpec] = Field(..., min_length=1)
    references: Dict[str, Dict[str, float]] = Field(default_factory=dict)
