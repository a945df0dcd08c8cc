"""
Feature construction.

Features derived from vaccination data are lags ``1..n_lags`` of the uptake
series; features derived from web data are the same-month frequencies of the
selected query terms. The row for step ``t`` reads uptake strictly before
``t`` and web frequencies at ``t``: web data is available near-real-time
while uptake at ``t`` is the unknown target.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from nowcast_core.models.features import FeatureSchema
from nowcast_core.models.timeseries import Dataset
from nowcast_core.utils.exceptions import (
    InsufficientHistoryError,
    ParameterError,
    RangeError,
    ShapeError,
)
from nowcast_core.utils.logging import get_logger
from nowcast_core.utils.validation import as_vector, validate_finite

logger = get_logger(__name__)

FeatureVector = npt.NDArray[np.float64]


def abs_correlations(
    target: npt.NDArray[np.float64], web: npt.NDArray[np.float64]
) -> Tuple[npt.NDArray[np.float64], npt.NDArray[np.bool_]]:
    """
    Absolute Pearson correlation of every web column with the target.

    Returns:
        ``(scores, defined)``; columns or targets with zero variance are
        undefined and score 0
    """
    yc = target - target.mean()
    wc = web - web.mean(axis=0)
    y_norm = float(np.sqrt(np.dot(yc, yc)))
    w_norm = np.sqrt(np.einsum("ij,ij->j", wc, wc))
    defined = (w_norm > 0) & (y_norm > 0)
    scores = np.zeros(web.shape[1], dtype=np.float64)
    if defined.any():
        scores[defined] = np.abs(wc[:, defined].T @ yc) / (w_norm[defined] * y_norm)
    return scores, defined


def select_terms(ds: Dataset, k_w: int, train_end: int) -> List[int]:
    """
    Pick the ``k_w`` terms most correlated with uptake over ``[0, train_end)``.

    Ranking is by absolute Pearson correlation, ties broken by panel column
    order; zero-variance terms score 0 and rank after every defined one.

    Raises:
        ParameterError: If ``k_w`` is negative or exceeds the term count, or
            ``train_end`` is outside ``[2, len(ds)]``

    Example:
        >>> select_terms(ds, k_w=0, train_end=24)
        []
    """
    if not 0 <= k_w <= ds.n_terms:
        raise ParameterError(
            "k_w exceeds the number of panel terms",
            details={"k_w": k_w, "terms": ds.n_terms},
        )
    if not 2 <= train_end <= len(ds):
        raise ParameterError(
            "train_end must lie in [2, len(ds)]",
            details={"train_end": train_end, "length": len(ds)},
        )
    if k_w == 0:
        return []

    scores, defined = abs_correlations(ds.target()[:train_end], ds.web()[:train_end])
    order = sorted(range(ds.n_terms), key=lambda j: (not defined[j], -scores[j], j))
    selected = order[:k_w]
    logger.debug(
        "terms_selected",
        k_w=k_w,
        train_end=train_end,
        terms=[ds.panel.terms[j] for j in selected],
        scores=[round(float(scores[j]), 6) for j in selected],
    )
    return selected


def schema_for(ds: Dataset, n_lags: int, term_indices: Sequence[int]) -> FeatureSchema:
    """
    Build a schema whose term indices are checked against the panel.

    Raises:
        ParameterError: If an index is invalid for the panel
    """
    for j in term_indices:
        if not 0 <= j < ds.n_terms:
            raise ParameterError(
                "term index out of range", details={"index": j, "terms": ds.n_terms}
            )
    return FeatureSchema(
        n_lags=n_lags,
        term_indices=tuple(term_indices),
        term_labels=tuple(ds.panel.terms[j] for j in term_indices),
    )


def feature_vector_at(ds: Dataset, schema: FeatureSchema, t: int) -> FeatureVector:
    """
    Feature vector for step ``t``.

    ``[uptake(t-1), ..., uptake(t-n_lags), panel(term_1, t), ...]``

    Raises:
        InsufficientHistoryError: If ``t < n_lags``
        RangeError: If ``t`` is outside the dataset

    Example:
        >>> feature_vector_at(ds_10_20_30, FeatureSchema(n_lags=2), 2)
        array([20., 10.])
    """
    if not 0 <= t < len(ds):
        raise RangeError("time step out of range", details={"t": t, "length": len(ds)})
    if t < schema.n_lags:
        raise InsufficientHistoryError(
            "not enough history for the lag features",
            details={"t": t, "n_lags": schema.n_lags},
        )
    y = ds.uptake.values
    lags = [y[t - k] for k in range(1, schema.n_lags + 1)]
    web = [ds.panel.matrix[j][t] for j in schema.term_indices]
    return np.asarray(lags + web, dtype=np.float64)


def training_matrix(
    ds: Dataset, schema: FeatureSchema, t_end: int
) -> Tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """
    Rows for every ``t`` in ``[n_lags, t_end)`` paired with ``uptake(t)``.

    Returns:
        ``(X, y)`` with ``X`` of shape ``(t_end - n_lags, F)``

    Raises:
        RangeError: If ``t_end`` exceeds the dataset
        InsufficientHistoryError: If no row qualifies
    """
    if t_end > len(ds):
        raise RangeError("t_end beyond dataset", details={"t_end": t_end, "length": len(ds)})
    view = FeatureView.from_dataset(ds, schema, t_end=max(t_end, 0))
    return view.training_rows(schema.n_lags, t_end)


class FeatureView:
    """
    Schema-resolved, append-only view of a series.

    Holds the target history and the feature row of every observed step.
    Rows for steps before ``n_lags`` exist but are never valid training rows.
    The streaming estimator grows its own view one observation at a time;
    batch callers build one from a :class:`Dataset`.

    Example:
        >>> view = FeatureView(schema)
        >>> view.append(web_row=[37.5], y=61.0)
        >>> x_next = view.pending_row([40.0])
    """

    def __init__(self, schema: FeatureSchema, capacity: int = 64):
        self.schema = schema
        self._length = 0
        self._matrix = np.empty((max(capacity, 1), schema.n_features), dtype=np.float64)
        self._target = np.empty(max(capacity, 1), dtype=np.float64)

    @classmethod
    def from_dataset(
        cls, ds: Dataset, schema: FeatureSchema, t_end: Optional[int] = None
    ) -> "FeatureView":
        """View over steps ``[0, t_end)`` of ``ds`` (whole dataset by default)."""
        end = len(ds) if t_end is None else t_end
        view = cls(schema, capacity=end)
        web = ds.web()[:, list(schema.term_indices)] if schema.term_indices else None
        target = ds.target()
        for t in range(end):
            view.append(web[t] if web is not None else (), float(target[t]))
        return view

    def __len__(self) -> int:
        return self._length

    @property
    def n_features(self) -> int:
        return self.schema.n_features

    @property
    def matrix(self) -> npt.NDArray[np.float64]:
        """Feature rows of observed steps (read-only view)."""
        out = self._matrix[: self._length]
        out.flags.writeable = False
        return out

    @property
    def target(self) -> npt.NDArray[np.float64]:
        """Observed targets (read-only view)."""
        out = self._target[: self._length]
        out.flags.writeable = False
        return out

    def pending_row(self, web_row: Sequence[float]) -> FeatureVector:
        """
        Feature vector for the next, not yet observed, step.

        Raises:
            InsufficientHistoryError: If fewer than ``n_lags`` steps are observed
            ShapeError: If ``web_row`` does not match the selected terms
        """
        t = self._length
        if t < self.schema.n_lags:
            raise InsufficientHistoryError(
                "not enough history for the lag features",
                details={"t": t, "n_lags": self.schema.n_lags},
            )
        return self._compose(t, web_row)

    def _compose(self, t: int, web_row: Sequence[float]) -> FeatureVector:
        web = np.asarray(web_row, dtype=np.float64).reshape(-1)
        if web.shape[0] != self.schema.n_web:
            raise ShapeError(
                "web row does not match selected terms",
                details={"expected": self.schema.n_web, "actual": int(web.shape[0])},
            )
        n_lags = self.schema.n_lags
        row = np.empty(self.schema.n_features, dtype=np.float64)
        for k in range(1, n_lags + 1):
            row[k - 1] = self._target[t - k] if t - k >= 0 else np.nan
        row[n_lags:] = web
        return row

    def append(self, web_row: Sequence[float], y: float) -> None:
        """
        Record the observation of the next step.

        Raises:
            DataValueError: If ``y`` or a web value is not finite
        """
        validate_finite(float(y), "observation")
        as_vector(web_row, self.schema.n_web, "web_row")
        t = self._length
        row = self._compose(t, web_row)
        if t == self._target.shape[0]:
            grow = max(2 * t, 16)
            self._matrix = np.resize(self._matrix, (grow, self.schema.n_features))
            self._target = np.resize(self._target, grow)
        self._matrix[t] = row
        self._target[t] = y
        self._length = t + 1

    def row(self, t: int) -> FeatureVector:
        """
        Feature row of an observed step.

        Raises:
            RangeError: If ``t`` is not observed
            InsufficientHistoryError: If ``t < n_lags``
        """
        if not 0 <= t < self._length:
            raise RangeError("time step not observed", details={"t": t, "length": self._length})
        if t < self.schema.n_lags:
            raise InsufficientHistoryError(
                "not enough history for the lag features",
                details={"t": t, "n_lags": self.schema.n_lags},
            )
        return self._matrix[t].copy()

    def rows(
        self, steps: Sequence[int]
    ) -> Tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
        """
        ``(X, y)`` gathered at the given observed steps, in the given order.

        Raises:
            RangeError: If a step is not observed or precedes ``n_lags``
        """
        idx = np.asarray(steps, dtype=np.intp)
        if idx.size and (idx.min() < self.schema.n_lags or idx.max() >= self._length):
            raise RangeError(
                "steps outside the valid training range",
                details={
                    "min": int(idx.min()),
                    "max": int(idx.max()),
                    "n_lags": self.schema.n_lags,
                    "length": self._length,
                },
            )
        return self._matrix[idx], self._target[idx]

    def training_rows(
        self, t_start: int, t_end: int
    ) -> Tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
        """
        ``(X, y)`` for observed steps ``[max(t_start, n_lags), t_end)``.

        Raises:
            InsufficientHistoryError: If the range holds no valid row
        """
        lo = max(t_start, self.schema.n_lags)
        hi = min(t_end, self._length)
        if hi <= lo:
            raise InsufficientHistoryError(
                "no training rows",
                details={"t_start": lo, "t_end": t_end, "n_lags": self.schema.n_lags},
            )
        return self._matrix[lo:hi].copy(), self._target[lo:hi].copy()
