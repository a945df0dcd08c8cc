"""
Data models package for nowcast-core.

Pydantic models for the time series, feature layouts, configurations,
scenarios and results used throughout the package.

Modules:
    timeseries: Months, uptake series, query panels and aligned datasets
    features: Feature layout of a design matrix
    ingest: Ingestion report
    scenario: Synthetic scenario recipe
    config: Estimator, baseline, search and comparison configuration
    results: Traces, trial records, comparison reports and manifests
"""

from nowcast_core.models.config import (
    DEFAULT_WARMUP,
    BaselineConfig,
    CompareSpec,
    EnetHyper,
    EstimatorConfig,
    MethodSpec,
    NowcastSettings,
    SearchIntervals,
    SeriesSpec,
    TreeParams,
)
from nowcast_core.models.features import FeatureSchema
from nowcast_core.models.ingest import IngestReport
from nowcast_core.models.results import (
    ComparisonReport,
    EstimationTrace,
    ReportRow,
    RunManifest,
    TraceStep,
    TrialRecord,
)
from nowcast_core.models.scenario import Scenario
from nowcast_core.models.timeseries import Dataset, MonthIndex, QueryPanel, UptakeSeries

__all__ = [
    # Time series
    "MonthIndex",
    "UptakeSeries",
    "QueryPanel",
    "Dataset",
    "FeatureSchema",
    "IngestReport",
    "Scenario",
    # Configuration
    "DEFAULT_WARMUP",
    "TreeParams",
    "EstimatorConfig",
    "EnetHyper",
    "BaselineConfig",
    "SearchIntervals",
    "NowcastSettings",
    "MethodSpec",
    "SeriesSpec",
    "CompareSpec",
    # Results
    "TraceStep",
    "EstimationTrace",
    "TrialRecord",
    "ReportRow",
    "ComparisonReport",
    "RunManifest",
]
