"""
Expert population of windowed regression trees.

Each expert is fixed at construction: a feature multiset drawn with
replacement from the complete feature set and a window size drawn from the
configured interval. At every step each expert is refitted on a bootstrap of
its window. Relative index ``0`` of a window is the most recent completed
observation ``t - 1``; the label at ``t`` is never visible to the fit.
"""

import hashlib
import json
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from joblib import Parallel, delayed

from nowcast_core.features.featurization import FeatureView
from nowcast_core.models.config import TreeParams
from nowcast_core.trees.regression_tree import FittedTree, fit_tree, predict_tree
from nowcast_core.utils.exceptions import (
    InsufficientHistoryError,
    ParameterError,
    ProtocolError,
)
from nowcast_core.utils.logging import get_logger
from nowcast_core.utils.validation import validate_interval

logger = get_logger(__name__)


@dataclass(frozen=True)
class TreeSpec:
    """
    Immutable description of one expert.

    Attributes:
        feature_multiset: Feature indices drawn with replacement, length F
        window: Window size ``s``
        seed: Per-expert seed, combined with the step for window sampling
        params: Tree growth limits
    """

    feature_multiset: Tuple[int, ...]
    window: int
    seed: int
    params: TreeParams = field(default_factory=TreeParams)

    @property
    def features(self) -> Tuple[int, ...]:
        """Distinct features, ascending."""
        return tuple(sorted(set(self.feature_multiset)))

    def as_dict(self) -> dict:
        return {
            "feature_multiset": list(self.feature_multiset),
            "window": self.window,
            "seed": self.seed,
            "params": self.params.model_dump(),
        }


def expert_seed(master_seed: int, n: int) -> int:
    """Seed of expert ``n``, independent of construction order."""
    return int(np.random.SeedSequence([master_seed, n]).generate_state(1)[0])


def init_specs(
    n_features: int,
    n_trees: int,
    window_interval: Tuple[int, int],
    params: Optional[TreeParams] = None,
    master_seed: int = 0,
) -> List[TreeSpec]:
    """
    Draw the initial expert population.

    Args:
        n_features: Size F of the complete feature set
        n_trees: Number of experts N
        window_interval: Inclusive ``(lo, hi)`` for window sizes
        params: Tree growth limits shared by every expert
        master_seed: Seed of the construction stream

    Raises:
        ParameterError: If ``N < 1``, ``F == 0`` or the interval is invalid

    Example:
        >>> specs = init_specs(n_features=1, n_trees=3, window_interval=(5, 5))
        >>> {s.window for s in specs}, {s.feature_multiset for s in specs}
        ({5}, {(0,)})
    """
    if n_trees < 1:
        raise ParameterError("n_trees must be at least 1", details={"n_trees": n_trees})
    if n_features < 1:
        raise ParameterError(
            "experts need at least one feature",
            details={"n_features": n_features, "n_trees": n_trees},
        )
    lo, hi = validate_interval(window_interval, "window_interval", minimum=0)
    params = params or TreeParams()

    rng = np.random.default_rng(master_seed)
    specs = []
    for n in range(n_trees):
        multiset = rng.integers(0, n_features, size=n_features)
        window = int(rng.integers(lo, hi + 1))
        specs.append(
            TreeSpec(
                feature_multiset=tuple(int(f) for f in multiset),
                window=window,
                seed=expert_seed(master_seed, n),
                params=params,
            )
        )
    logger.debug(
        "expert_specs_drawn",
        n_trees=n_trees,
        n_features=n_features,
        window_interval=(lo, hi),
        master_seed=master_seed,
    )
    return specs


def window_sample(
    spec: TreeSpec,
    t: int,
    rng: Optional[np.random.Generator] = None,
    min_step: int = 0,
) -> npt.NDArray[np.intp]:
    """
    Bootstrap the absolute steps an expert trains on at step ``t``.

    Draws ``B = h + 1`` relative indices uniformly with replacement from
    ``[0, h]`` with ``h = min(window, t - 1)`` and maps relative ``r`` to
    absolute ``t - 1 - r``. Draws landing before ``min_step`` (rows without
    complete lags) are redrawn from the usable part of the window, so the
    sample size never depends on ``min_step``.

    Args:
        spec: Expert description
        t: Step about to be predicted
        rng: Random stream (defaults to one seeded by ``(spec.seed, t)``)
        min_step: Earliest usable step

    Raises:
        InsufficientHistoryError: If no step in ``[min_step, t)`` exists

    Example:
        >>> window_sample(TreeSpec((0,), window=0, seed=1), t=7)
        array([6])
    """
    newest = t - 1
    if newest < min_step:
        raise InsufficientHistoryError(
            "no completed observation in the window",
            details={"t": t, "min_step": min_step},
        )
    h = min(spec.window, newest)
    usable = min(spec.window, newest - min_step)
    if rng is None:
        rng = np.random.default_rng([spec.seed, t])
    relative = rng.integers(0, h + 1, size=h + 1)
    invalid = relative > usable
    if invalid.any():
        relative[invalid] = rng.integers(0, usable + 1, size=int(invalid.sum()))
    return (newest - relative).astype(np.intp)


def _fit_expert(spec: TreeSpec, view: FeatureView, t: int) -> FittedTree:
    steps = window_sample(spec, t, min_step=view.schema.n_lags)
    X, y = view.rows(steps)
    return fit_tree(X, y, spec.feature_multiset, spec.params)


class ExpertPool:
    """
    Fixed expert specs plus their most recent fits.

    Specs never change after construction; :func:`retrain` returns a new pool
    sharing them with refreshed fits.

    Example:
        >>> pool = ExpertPool(init_specs(3, 10, (1, 46)))
        >>> pool = retrain(pool, view, t=25)
        >>> preds = pool.predict(view.pending_row(web))
    """

    def __init__(
        self,
        specs: Sequence[TreeSpec],
        fitted: Optional[Sequence[FittedTree]] = None,
        fitted_at: Optional[int] = None,
    ):
        if not specs:
            raise ParameterError("an expert pool needs at least one spec")
        if fitted is not None and len(fitted) != len(specs):
            raise ParameterError(
                "fits are not aligned with specs",
                details={"specs": len(specs), "fitted": len(fitted)},
            )
        self.specs: Tuple[TreeSpec, ...] = tuple(specs)
        self.fitted: Optional[Tuple[FittedTree, ...]] = (
            tuple(fitted) if fitted is not None else None
        )
        self.fitted_at = fitted_at

    def __len__(self) -> int:
        return len(self.specs)

    @property
    def windows(self) -> npt.NDArray[np.int64]:
        return np.array([s.window for s in self.specs], dtype=np.int64)

    def spec_digest(self) -> str:
        """sha256 over the canonical JSON of every spec."""
        payload = json.dumps([s.as_dict() for s in self.specs], sort_keys=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def predict(self, x: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """
        Per-expert predictions for feature vector ``x``.

        Raises:
            ProtocolError: If the pool has not been fitted
            ShapeError: If ``x`` is too short for some expert
        """
        if self.fitted is None:
            raise ProtocolError("expert pool has not been fitted")
        row = np.asarray(x, dtype=np.float64).reshape(-1)
        return np.array([predict_tree(tree, row) for tree in self.fitted], dtype=np.float64)


def retrain(pool: ExpertPool, view: FeatureView, t: int, n_jobs: int = 1) -> ExpertPool:
    """
    Refit every expert on its window bootstrap before predicting step ``t``.

    Only rows of steps ``< t`` are read. Every expert samples from its own
    ``(seed, t)`` stream, so the result does not depend on ``n_jobs``.

    Args:
        pool: Pool whose specs are reused
        view: Feature view holding at least the steps ``< t``
        t: Step about to be predicted
        n_jobs: Worker threads (1 fits sequentially)

    Raises:
        InsufficientHistoryError: If ``t < n_lags + 1`` or the view lacks history
    """
    n_lags = view.schema.n_lags
    if t < n_lags + 1 or t > len(view):
        raise InsufficientHistoryError(
            "not enough history to retrain",
            details={"t": t, "n_lags": n_lags, "observed": len(view)},
        )
    if n_jobs > 1 and len(pool) > 1:
        fitted = Parallel(n_jobs=n_jobs, prefer="threads")(
            delayed(_fit_expert)(spec, view, t) for spec in pool.specs
        )
    else:
        fitted = [_fit_expert(spec, view, t) for spec in pool.specs]
    logger.debug("experts_retrained", t=t, n_trees=len(pool), n_jobs=n_jobs)
    return ExpertPool(pool.specs, fitted, fitted_at=t)
