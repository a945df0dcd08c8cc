"""
CART-style regression tree.

Recursive binary splitting by squared-error reduction with mean-valued
leaves. The split search is vectorized per node: every candidate feature is
sorted once and left/right SSE for every cut position come from cumulative
sums, so a node costs one ``argsort`` over the ``(n, k)`` sub-matrix.

Tie-breaking among equal gains is by lowest feature index, then lowest
threshold.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from nowcast_core.models.config import TreeParams
from nowcast_core.utils.exceptions import ParameterError, ShapeError

LEAF = -1

# Relative slack for "the split reduces SSE": cumulative-sum round-off must not
# pass for a real improvement on constant-within-node targets.
_GAIN_RTOL = 1e-12

# Gains this close to the best, relative to the parent SSE, are ties.
_TIE_RTOL = 1e-9


@dataclass(frozen=True)
class Split:
    """Best split of one node."""

    feature: int
    threshold: float
    gain: float
    position: int


@dataclass(frozen=True)
class FittedTree:
    """
    Immutable array-encoded tree.

    Node ``0`` is the root. Internal nodes have ``feature[i] >= 0`` and route
    ``x[feature] <= threshold`` to ``left[i]``; leaves have ``feature[i] == -1``
    and predict ``value[i]``, the mean of the ``n_samples[i]`` training targets
    routed to them.
    """

    feature: Tuple[int, ...]
    threshold: Tuple[float, ...]
    left: Tuple[int, ...]
    right: Tuple[int, ...]
    value: Tuple[float, ...]
    n_samples: Tuple[int, ...]

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    @property
    def n_leaves(self) -> int:
        return sum(1 for f in self.feature if f == LEAF)

    @cached_property
    def max_feature(self) -> int:
        """Largest feature index used by a split, ``-1`` for a single leaf."""
        return max(self.feature)

    @property
    def depth(self) -> int:
        """Length of the longest root-to-leaf path (0 for a single leaf)."""
        best = 0
        stack = [(0, 0)]
        while stack:
            node, d = stack.pop()
            if self.feature[node] == LEAF:
                best = max(best, d)
            else:
                stack.append((self.left[node], d + 1))
                stack.append((self.right[node], d + 1))
        return best

    @property
    def root_split(self) -> Optional[Tuple[int, float]]:
        """``(feature, threshold)`` of the root, None for a single leaf."""
        if self.feature[0] == LEAF:
            return None
        return self.feature[0], self.threshold[0]

    def predict(self, x: npt.ArrayLike) -> float:
        return predict_tree(self, x)

    def predict_many(self, X: npt.ArrayLike) -> npt.NDArray[np.float64]:
        rows = np.atleast_2d(np.asarray(X, dtype=np.float64))
        return np.array([predict_tree(self, row) for row in rows], dtype=np.float64)

    def sse(self, X: npt.ArrayLike, y: npt.ArrayLike) -> float:
        """Sum of squared errors of the tree on ``(X, y)``."""
        err = self.predict_many(X) - np.asarray(y, dtype=np.float64)
        return float(np.dot(err, err))

    def to_text(self, feature_names: Optional[Sequence[str]] = None) -> str:
        """
        Indented debug dump; not a stable format.

        Example:
            >>> print(tree.to_text())
            f[0] <= 0.5
              leaf 0 (n=1)
              leaf 10 (n=1)
        """
        lines: List[str] = []
        stack = [(0, 0)]
        while stack:
            node, d = stack.pop()
            pad = "  " * d
            f = self.feature[node]
            if f == LEAF:
                lines.append(f"{pad}leaf {self.value[node]:.6g} (n={self.n_samples[node]})")
                continue
            name = feature_names[f] if feature_names is not None else f"f[{f}]"
            lines.append(f"{pad}{name} <= {self.threshold[node]:.6g}")
            stack.append((self.right[node], d + 1))
            stack.append((self.left[node], d + 1))
        return "\n".join(lines)


def _midpoint(lo: float, hi: float) -> float:
    mid = (lo + hi) / 2.0
    # Keep the cut strictly below ``hi`` for adjacent floats.
    return mid if mid < hi else lo


def best_split(
    X: npt.NDArray[np.float64],
    y: npt.NDArray[np.float64],
    features: Sequence[int],
    min_samples_leaf: int = 1,
) -> Optional[Split]:
    """
    Exhaustive best split of one node over ``features``.

    Candidate thresholds are midpoints between consecutive distinct sorted
    values; a cut is admissible when both children keep at least
    ``min_samples_leaf`` samples. Gains are ``parent_sse - (left_sse +
    right_sse)`` with ``sse = sum(y^2) - sum(y)^2 / n``.

    Gains within a relative ``1e-9`` of the parent SSE of the best gain count
    as equal, so round-off never overturns the tie rule.

    Returns:
        The best split, or None when no cut is admissible
    """
    n = y.shape[0]
    if n < 2 * min_samples_leaf or not features:
        return None

    feats = np.asarray(features, dtype=np.intp)
    sub = X[:, feats]
    order = np.argsort(sub, axis=0, kind="stable")
    xs = np.take_along_axis(sub, order, axis=0)
    ys = y[order]

    csum = np.cumsum(ys, axis=0)
    csq = np.cumsum(ys * ys, axis=0)
    total, total_sq = csum[-1, 0], csq[-1, 0]
    parent = total_sq - total * total / n

    n_left = np.arange(1, n, dtype=np.float64)[:, None]
    n_right = n - n_left
    left_sum, left_sq = csum[:-1], csq[:-1]
    right_sum, right_sq = total - left_sum, total_sq - left_sq
    children = (left_sq - left_sum * left_sum / n_left) + (
        right_sq - right_sum * right_sum / n_right
    )
    gain = parent - children

    valid = (xs[:-1] < xs[1:]) & (n_left >= min_samples_leaf) & (n_right >= min_samples_leaf)
    if not valid.any():
        return None
    gain = np.where(valid, gain, -np.inf)
    top = float(gain.max())
    tied = gain >= top - _TIE_RTOL * max(float(parent), 1e-300)

    # Column-major flatten: first tie is the lowest feature, then lowest cut.
    flat = int(np.argmax(tied.T))
    col, pos = divmod(flat, n - 1)
    return Split(
        feature=int(feats[col]),
        threshold=_midpoint(float(xs[pos, col]), float(xs[pos + 1, col])),
        gain=float(gain[pos, col]),
        position=pos,
    )


def fit_tree(
    X: npt.ArrayLike,
    y: npt.ArrayLike,
    features: Sequence[int],
    params: Optional[TreeParams] = None,
) -> FittedTree:
    """
    Grow a regression tree greedily.

    Duplicate indices in ``features`` are collapsed; only the distinct
    features take part in the split search.

    Args:
        X: Training rows, shape ``(m, F)``
        y: Training targets, length ``m``
        features: Feature indices the tree may split on
        params: Growth limits (fully grown by default)

    Returns:
        Fitted tree

    Raises:
        ParameterError: If the training set is empty, sizes disagree or a
            feature index is out of range

    Example:
        >>> tree = fit_tree([[0.0], [1.0]], [0.0, 10.0], features=[0])
        >>> tree.root_split
        (0, 0.5)
    """
    params = params or TreeParams()
    y_arr = np.asarray(y, dtype=np.float64).reshape(-1)
    m = y_arr.shape[0]
    if m == 0:
        raise ParameterError("cannot fit a tree on an empty training set")
    X_arr = np.asarray(X, dtype=np.float64)
    if X_arr.ndim == 1 and X_arr.size == 0:
        X_arr = np.empty((m, 0), dtype=np.float64)
    if X_arr.ndim != 2 or X_arr.shape[0] != m:
        raise ParameterError(
            "X and y sizes disagree",
            details={"x_shape": list(X_arr.shape), "y_length": m},
        )
    n_features = X_arr.shape[1]
    feats = sorted(set(int(f) for f in features))
    if feats and (feats[0] < 0 or feats[-1] >= n_features):
        raise ParameterError(
            "feature index out of range",
            details={"features": feats, "n_features": n_features},
        )

    feature: List[int] = []
    threshold: List[float] = []
    left: List[int] = []
    right: List[int] = []
    value: List[float] = []
    n_samples: List[int] = []

    def new_node(idx: npt.NDArray[np.intp]) -> int:
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        value.append(float(y_arr[idx].mean()))
        n_samples.append(int(idx.shape[0]))
        return len(feature) - 1

    root = np.arange(m, dtype=np.intp)
    stack = [(new_node(root), root, 0)]
    while stack:
        node, idx, depth = stack.pop()
        if params.max_depth is not None and depth >= params.max_depth:
            continue
        y_node = y_arr[idx]
        if idx.shape[0] < 2 or float(np.ptp(y_node)) == 0.0:
            continue
        split = best_split(X_arr[idx], y_node, feats, params.min_samples_leaf)
        if split is None:
            continue
        parent_sse = float(np.sum((y_node - y_node.mean()) ** 2))
        if split.gain <= params.min_impurity_decrease + _GAIN_RTOL * max(1.0, parent_sse):
            continue

        goes_left = X_arr[idx, split.feature] <= split.threshold
        left_idx, right_idx = idx[goes_left], idx[~goes_left]
        feature[node] = split.feature
        threshold[node] = split.threshold
        left[node] = new_node(left_idx)
        right[node] = new_node(right_idx)
        stack.append((right[node], right_idx, depth + 1))
        stack.append((left[node], left_idx, depth + 1))

    return FittedTree(
        feature=tuple(feature),
        threshold=tuple(threshold),
        left=tuple(left),
        right=tuple(right),
        value=tuple(value),
        n_samples=tuple(n_samples),
    )


def predict_tree(tree: FittedTree, x: npt.ArrayLike) -> float:
    """
    Route ``x`` to a leaf and return its value.

    Raises:
        ShapeError: If ``x`` is too short for a feature the tree splits on

    Example:
        >>> predict_tree(fit_tree([[0.0], [1.0]], [0.0, 10.0], [0]), [1.0])
        10.0
    """
    row = np.asarray(x, dtype=np.float64).reshape(-1)
    if row.shape[0] <= tree.max_feature:
        raise ShapeError(
            "feature vector too short for tree",
            details={"length": int(row.shape[0]), "max_feature": tree.max_feature},
        )
    node = 0
    feature, threshold, left, right = tree.feature, tree.threshold, tree.left, tree.right
    while feature[node] != LEAF:
        node = left[node] if row[feature[node]] <= threshold[node] else right[node]
    return tree.value[node]
