"""
Nowcast Core - adaptive estimation of slowly reported monthly series.

Estimates monthly vaccination uptake from near-real-time web query
frequencies with an online ensemble of windowed regression trees whose
weights follow an exponential update, next to cross-validated lasso and
elastic-net baselines evaluated in the same walk-forward protocol.

Core Components:
    - Models: Pydantic data and configuration models
    - Data: CSV ingestion and seeded synthetic scenarios
    - Trees / Online: regression-tree experts and weighted aggregation
    - Baselines: coordinate-descent lasso and elastic net
    - Evaluation: metrics, random search, comparison reports
    - Registry: estimation methods by name
    - CLI: the ``nowcast`` command

Example:
    >>> from nowcast_core.data import generate, preset
    >>> from nowcast_core.online import run
    >>> from nowcast_core.models import EstimatorConfig
    >>>
    >>> ds = generate(preset("regime_drop", seed=1))
    >>> trace = run(ds, EstimatorConfig(n_trees=200, n_lags=3, n_web=2))
    >>> print(trace.rmse)
"""

from nowcast_core.__version__ import (
    __description__,
    __license__,
    __title__,
    __version__,
    __version_info__,
)

__all__ = [
    "__version__",
    "__version_info__",
    "__title__",
    "__description__",
    "__license__",
]
