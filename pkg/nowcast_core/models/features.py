"""
Feature schema model.

The complete feature set experts sample from: lags ``1..n_lags`` of the
uptake series followed by same-month frequencies of the selected query terms.
"""

from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class FeatureSchema(BaseModel):
    """
    Ordered feature layout.

    Attributes:
        n_lags: Number of uptake-lag features (lags 1..n_lags)
        term_indices: Panel columns used as web features, in feature order
        term_labels: Labels of those columns

    Example:
        >>> schema = FeatureSchema(n_lags=2, term_indices=(3,), term_labels=("hpv",))
        >>> schema.labels
        ('lag_1', 'lag_2', 'term_hpv')
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_lags: int = Field(default=0, ge=0, description="Uptake-lag features")
    term_indices: Tuple[int, ...] = Field(default=(), description="Selected panel columns")
    term_labels: Tuple[str, ...] = Field(default=(), description="Selected term labels")

    @model_validator(mode="after")
    def check_terms(self) -> "FeatureSchema":
        """Term indices are distinct, non-negative and labelled."""
        if len(set(self.term_indices)) != len(self.term_indices):
            raise ValueError("term_indices must be distinct")
        if any(i < 0 for i in self.term_indices):
            raise ValueError("term_indices must be non-negative")
        if self.term_labels and len(self.term_labels) != len(self.term_indices):
            raise ValueError("term_labels must match term_indices")
        return self

    @property
    def n_web(self) -> int:
        return len(self.term_indices)

    @property
    def n_features(self) -> int:
        """Total feature count F."""
        return self.n_lags + len(self.term_indices)

    @property
    def labels(self) -> Tuple[str, ...]:
        """Feature names: ``lag_k`` then ``term_<label>``."""
        lags = tuple(f"lag_{k}" for k in range(1, self.n_lags + 1))
        names = self.term_labels or tuple(str(i) for i in self.term_indices)
        return lags + tuple(f"term_{name}" for name in names)
