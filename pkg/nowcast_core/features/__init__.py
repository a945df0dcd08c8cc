"""Term selection and lagged design matrices."""

from nowcast_core.features.featurization import (
    FeatureView,
    feature_vector_at,
    schema_for,
    select_terms,
    training_matrix,
)

__all__ = [
    "select_terms",
    "schema_for",
    "feature_vector_at",
    "training_matrix",
    "FeatureView",
]
