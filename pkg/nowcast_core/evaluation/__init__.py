"""
Evaluation of estimation methods.

Modules:
    metrics: RMSE and MAE of traces
    search: Random hyperparameter search
    report: Artifact output with manifests
    compare: Method comparison reports (import from
        ``nowcast_core.evaluation.compare``; it depends on the method registry)
"""

from nowcast_core.evaluation.metrics import evaluate_trace, mae, rmse
from nowcast_core.evaluation.report import build_manifest, manifest_path, write_artifact
from nowcast_core.evaluation.search import default_tune_range, random_search, sample_configs

__all__ = [
    "rmse",
    "mae",
    "evaluate_trace",
    "sample_configs",
    "random_search",
    "default_tune_range",
    "build_manifest",
    "manifest_path",
    "write_artifact",
]
