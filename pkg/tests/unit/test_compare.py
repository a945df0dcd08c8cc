"""Tests for method comparison."""

from typing import Any, Dict, Optional

import pytest

from nowcast_core.evaluation.compare import build_method, common_range, compare
from nowcast_core.interfaces.method import EstimationMethod
from nowcast_core.models.config import MethodSpec, SearchIntervals
from nowcast_core.models.results import EstimationTrace, TraceStep
from nowcast_core.models.timeseries import Dataset
from nowcast_core.registry.method_registry import MethodRegistry
from nowcast_core.utils.exceptions import (
    ConfigError,
    InsufficientHistoryError,
    ParameterError,
    RegistryError,
)
from tests.fixtures.sample_data import create_sample_dataset

ATSE_CONFIG = {
    "eta": 0.05,
    "n_trees": 6,
    "window_interval": (1, 12),
    "n_lags": 2,
    "n_web": 1,
}
LASSO_CONFIG = {"n_lags": 2, "lambdas": (0.01, 0.1, 1.0)}


class LastValueMethod(EstimationMethod):
    """Predicts the previous observation."""

    name = "last"

    def __init__(self, start: int = 25):
        self.start = start

    def run(self, ds: Dataset, series: Optional[str] = None) -> EstimationTrace:
        y = ds.target()
        steps = [
            TraceStep(
                t=t,
                month=str(ds.month_at(t)),
                prediction=float(y[t - 1]),
                observation=float(y[t]),
            )
            for t in range(self.start, len(ds))
        ]
        return EstimationTrace(method=self.name, series=series, steps=steps)

    def describe(self) -> Dict[str, Any]:
        return {"name": self.name, "start": self.start}


def _specs():
    return [
        MethodSpec(method="atse", config=ATSE_CONFIG),
        MethodSpec(method="lasso", config=LASSO_CONFIG),
    ]


class TestBuildMethod:
    """Tests for build_method."""

    def test_shared_warmup(self):
        """Test built-in methods inherit the comparison warmup."""
        method = build_method(MethodSpec(method="atse", config=ATSE_CONFIG), MethodRegistry(), 30)
        assert method.first_step == 31

    def test_config_warmup_wins(self):
        """Test a warmup in the method config overrides the shared one."""
        spec = MethodSpec(method="lasso", config={"warmup": 12})
        assert build_method(spec, MethodRegistry(), 30).first_step == 13

    def test_invalid_config(self):
        """Test a bad method config raises ConfigError."""
        spec = MethodSpec(method="atse", config={"n_trees": 0})
        with pytest.raises(ConfigError) as exc_info:
            build_method(spec, MethodRegistry())
        assert exc_info.value.details["method"] == "atse"

    def test_unknown_method(self):
        """Test an unregistered name raises RegistryError."""
        with pytest.raises(RegistryError):
            build_method(MethodSpec(method="nope"), MethodRegistry())


class TestCommonRange:
    """Tests for common_range."""

    def test_overlap(self):
        """Test the range covered by every trace."""
        a = LastValueMethod(start=25).run(create_sample_dataset([1.0] * 40))
        b = LastValueMethod(start=30).run(create_sample_dataset([1.0] * 35))
        assert common_range([a, b]) == (30, 35)


class TestCompare:
    """Tests for compare."""

    def test_report_layout(self, drop_dataset, constant_dataset):
        """Test one row per series and method with one best per series."""
        report = compare({"drop": drop_dataset, "flat": constant_dataset}, _specs())
        assert report.series() == ["drop", "flat"]
        assert report.methods() == ["atse", "lasso"]
        for series in report.series():
            assert sum(r.best for r in report.rows if r.series == series) == 1
        drop_rows = [r for r in report.rows if r.series == "drop"]
        assert {r.n_predictions for r in drop_rows} == {55}

    def test_ties_prefer_first_listed(self, constant_dataset):
        """Test equal scores flag the first listed method."""
        report = compare({"flat": constant_dataset}, _specs())
        assert [r.rmse for r in report.rows] == pytest.approx([0.0, 0.0], abs=1e-9)
        assert report.best_method("flat") == "atse"

    def test_scores_common_range(self, drop_dataset):
        """Test methods starting later shrink the scored range for everyone."""
        registry = MethodRegistry()
        registry.register("last", LastValueMethod)
        specs = [
            MethodSpec(method="lasso", config=LASSO_CONFIG),
            MethodSpec(method="last", label="late", config={"start": 60}),
        ]
        report = compare({"drop": drop_dataset}, specs, registry=registry)
        assert [r.n_predictions for r in report.rows] == [20, 20]
        assert report.methods() == ["lasso", "late"]

    def test_score_from(self, drop_dataset):
        """Test an explicit first scored step."""
        report = compare({"drop": drop_dataset}, _specs(), score_from=70)
        assert {r.n_predictions for r in report.rows} == {10}

    def test_tuned_method_scores_after_tuning_range(self, drop_dataset):
        """Test tuning moves scoring past the tuning range."""
        intervals = SearchIntervals(
            window=(1, 6), n_lags=(1, 2), n_web=(1, 2), n_trees=(3, 4), eta=(0.01, 0.1)
        )
        specs = [
            MethodSpec(method="atse", tune_trials=2, tune_seed=1, intervals=intervals),
            MethodSpec(method="lasso", config=LASSO_CONFIG),
        ]
        report = compare({"drop": drop_dataset}, specs)
        assert {r.n_predictions for r in report.rows} == {28}

    def test_references_kept(self, constant_dataset):
        """Test reference scores are attached to the report."""
        refs = {"flat": {"published": 1.0}}
        report = compare({"flat": constant_dataset}, _specs(), references=refs)
        assert report.references == refs
        assert report.beats_references("flat", 0.0)

    def test_duplicate_labels(self, drop_dataset):
        """Test repeated method labels raise ParameterError."""
        specs = [MethodSpec(method="lasso"), MethodSpec(method="enet", label="lasso")]
        with pytest.raises(ParameterError):
            compare({"drop": drop_dataset}, specs)

    def test_no_inputs(self, drop_dataset):
        """Test empty inputs raise ParameterError."""
        with pytest.raises(ParameterError):
            compare({}, _specs())
        with pytest.raises(ParameterError):
            compare({"drop": drop_dataset}, [])

    def test_method_errors_name_series_and_method(self):
        """Test a failing run reports where it failed."""
        short = create_sample_dataset([50.0] * 20)
        with pytest.raises(InsufficientHistoryError) as exc_info:
            compare({"short": short}, _specs())
        assert exc_info.value.details["series"] == "short"
        assert exc_info.value.details["method"] == "atse"
