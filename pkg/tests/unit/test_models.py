"""Tests for result models."""

import json
import math

import pytest

from nowcast_core.models.config import EstimatorConfig
from nowcast_core.models.results import (
    ComparisonReport,
    EstimationTrace,
    ReportRow,
    TraceStep,
    TrialRecord,
    trials_to_frame,
)


def _trace(weights=False):
    steps = [
        TraceStep(t=25, month="2013-02", prediction=70.0, observation=72.5),
        TraceStep(t=26, month="2013-03", prediction=71.0, observation=70.0),
        TraceStep(t=27, month="2013-04", prediction=69.5, observation=69.5),
    ]
    history = [(0.5, 0.5), (0.75, 0.25), (0.8, 0.2)] if weights else None
    return EstimationTrace(method="atse", series="drop", steps=steps, weights_history=history)


def _report():
    return ComparisonReport(
        rows=[
            ReportRow(series="drop", method="atse", rmse=1.5, n_predictions=55, best=True),
            ReportRow(series="drop", method="lasso", rmse=4.25, n_predictions=55),
            ReportRow(series="rise", method="atse", rmse=3.0, n_predictions=55),
            ReportRow(series="rise", method="lasso", rmse=2.0, n_predictions=55, best=True),
        ],
        references={"drop": {"published": 2.0}},
    )


class TestEstimationTrace:
    """Tests for EstimationTrace."""

    def test_rmse(self):
        """Test the derived RMSE."""
        assert _trace().rmse == pytest.approx(math.sqrt((2.5**2 + 1.0) / 3))

    def test_empty(self):
        """Test an empty trace has NaN RMSE and no first step."""
        trace = EstimationTrace()
        assert math.isnan(trace.rmse)
        assert trace.first_step is None
        assert len(trace) == 0

    def test_restrict_keeps_weights_aligned(self):
        """Test restricting a trace also restricts its weight history."""
        scoped = _trace(weights=True).restrict(26, 27)
        assert scoped.step_indices() == [26]
        assert scoped.weights_history == [(0.75, 0.25)]

    def test_csv(self):
        """Test the plot-ready CSV layout."""
        lines = _trace().to_csv().splitlines()
        assert lines[0] == "t,month,prediction,observation,abs_error"
        assert lines[1] == "25,2013-02,70.0,72.5,2.5"
        assert len(lines) == 4

    def test_csv_with_weights(self):
        """Test weight columns follow the trace columns."""
        header = _trace(weights=True).to_csv(include_weights=True).splitlines()[0]
        assert header == "t,month,prediction,observation,abs_error,w_0,w_1"

    def test_json_includes_rmse(self):
        """Test the serialized trace carries its RMSE."""
        payload = json.loads(_trace().model_dump_json())
        assert payload["rmse"] == pytest.approx(_trace().rmse)


class TestComparisonReport:
    """Tests for ComparisonReport."""

    def test_best_method(self):
        """Test the flagged method per series."""
        report = _report()
        assert report.best_method("drop") == "atse"
        assert report.best_method("rise") == "lasso"
        assert report.best_method("other") is None

    def test_csv(self):
        """Test the delimiter-separated form."""
        lines = _report().to_csv().splitlines()
        assert lines[0] == "series,method,rmse,n_predictions,best"
        assert lines[1] == "drop,atse,1.5,55,True"

    def test_table_marks(self):
        """Test best and reference-beating marks in the table."""
        table = _report().to_table()
        drop_line = next(line for line in table.splitlines() if line.strip().startswith("drop"))
        assert "1.500*+" in drop_line
        assert "4.250" in drop_line and "4.250+" not in drop_line
        assert "2.000" in drop_line
        rise_line = next(line for line in table.splitlines() if line.strip().startswith("rise"))
        assert "2.000*" in rise_line
        assert rise_line.split()[-1] == "-"

    def test_beats_references(self):
        """Test a score equal to the reference counts as beating it."""
        report = _report()
        assert report.beats_references("drop", 2.0)
        assert not report.beats_references("drop", 2.1)
        assert not report.beats_references("rise", 0.0)

    def test_one_reference_is_enough(self):
        """Test the mark needs only one reference at or above the score."""
        report = ComparisonReport(
            rows=[ReportRow(series="hpv1", method="atse", rmse=10.0, n_predictions=42, best=True)],
            references={"hpv1": {"UBW": 11.5, "UBWC": 9.3}},
        )
        assert report.beats_references("hpv1", 10.0)
        assert not report.beats_references("hpv1", 11.6)
        hpv_line = next(
            line for line in report.to_table().splitlines() if line.strip().startswith("hpv1")
        )
        assert "10.000*+" in hpv_line

    def test_json(self):
        """Test the structured form."""
        payload = json.loads(_report().to_json())
        assert payload["columns"] == ["series", "method", "rmse", "n_predictions", "best"]
        assert len(payload["rows"]) == 4
        assert payload["references"] == {"drop": {"published": 2.0}}


class TestTrials:
    """Tests for trial records."""

    def test_frame(self):
        """Test one row per trial with the sampled fields."""
        cfg = EstimatorConfig(window_interval=(1, 9), n_trees=600)
        trials = [
            TrialRecord(index=0, config=cfg, rmse=2.0, n_predictions=27),
            TrialRecord(index=1, config=cfg, rmse=math.inf, status="failed", error="short"),
        ]
        frame = trials_to_frame(trials)
        assert frame["trial"].tolist() == [0, 1]
        assert frame["window_hi"].tolist() == [9, 9]
        assert frame["status"].tolist() == ["ok", "failed"]
        assert frame["error"].tolist() == ["", "short"]
