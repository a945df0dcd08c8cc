"""
Result models for nowcast-core.

Estimation traces, random-search trial records, comparison reports and the
run manifest written next to every command output.
"""

import json
import math
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
import numpy.typing as npt
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, computed_field

from nowcast_core.models.config import EstimatorConfig

TRACE_COLUMNS = ["t", "month", "prediction", "observation", "abs_error"]
REPORT_COLUMNS = ["series", "method", "rmse", "n_predictions", "best"]


class TraceStep(BaseModel):
    """One predicted step: estimate made before ``observation`` was revealed."""

    model_config = ConfigDict(frozen=True)

    t: int = Field(..., ge=0, description="Time step")
    month: str = Field(..., description="Calendar month, YYYY-MM")
    prediction: float = Field(..., description="Estimate made before observing")
    observation: float = Field(..., description="Revealed value")

    @property
    def abs_error(self) -> float:
        return abs(self.prediction - self.observation)


class EstimationTrace(BaseModel):
    """
    Walk-forward predictions of one method on one series.

    ``rmse`` is derived from ``steps`` and therefore always consistent.

    Attributes:
        method: Method name
        series: Series label, if known
        steps: Predicted steps in time order
        weights_history: Expert weights after each observation (opt-in)
    """

    method: str = Field(default="atse", description="Method name")
    series: Optional[str] = Field(default=None, description="Series label")
    steps: List[TraceStep] = Field(default_factory=list, description="Predicted steps")
    weights_history: Optional[List[Tuple[float, ...]]] = Field(
        default=None, description="Per-step expert weights"
    )

    @computed_field  # type: ignore[misc]
    @property
    def rmse(self) -> float:
        """Root mean squared error over all steps (NaN when empty)."""
        if not self.steps:
            return math.nan
        err = self.predictions() - self.observations()
        return float(np.sqrt(np.mean(err * err)))

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def first_step(self) -> Optional[int]:
        return self.steps[0].t if self.steps else None

    def step_indices(self) -> List[int]:
        return [s.t for s in self.steps]

    def predictions(self) -> npt.NDArray[np.float64]:
        return np.array([s.prediction for s in self.steps], dtype=np.float64)

    def observations(self) -> npt.NDArray[np.float64]:
        return np.array([s.observation for s in self.steps], dtype=np.float64)

    def restrict(self, t0: int, t1: Optional[int] = None) -> "EstimationTrace":
        """Trace limited to steps in ``[t0, t1)``."""
        keep = [
            i for i, s in enumerate(self.steps) if s.t >= t0 and (t1 is None or s.t < t1)
        ]
        weights = None
        if self.weights_history is not None:
            weights = [self.weights_history[i] for i in keep]
        return EstimationTrace(
            method=self.method,
            series=self.series,
            steps=[self.steps[i] for i in keep],
            weights_history=weights,
        )

    def to_frame(self, include_weights: bool = False) -> pd.DataFrame:
        """
        Plot-ready table ``t,month,prediction,observation,abs_error``.

        With ``include_weights`` the expert weights follow as ``w_0..w_{N-1}``.
        """
        frame = pd.DataFrame(
            {
                "t": [s.t for s in self.steps],
                "month": [s.month for s in self.steps],
                "prediction": [s.prediction for s in self.steps],
                "observation": [s.observation for s in self.steps],
                "abs_error": [s.abs_error for s in self.steps],
            },
            columns=TRACE_COLUMNS,
        )
        if include_weights and self.weights_history:
            weights = np.asarray(self.weights_history, dtype=np.float64)
            columns = [f"w_{n}" for n in range(weights.shape[1])]
            frame = pd.concat([frame, pd.DataFrame(weights, columns=columns)], axis=1)
        return frame

    def to_csv(self, include_weights: bool = False) -> str:
        return str(self.to_frame(include_weights).to_csv(index=False, lineterminator="\n"))


class TrialRecord(BaseModel):
    """
    One random-search trial.

    Attributes:
        index: Trial index (log order)
        config: Sampled estimator configuration
        rmse: RMSE over the tuning range (``inf`` when failed)
        n_predictions: Predictions scored
        status: ``ok`` or ``failed``
        error: Failure message
    """

    model_config = ConfigDict(frozen=True)

    index: int = Field(..., ge=0)
    config: EstimatorConfig
    rmse: float
    n_predictions: int = Field(default=0, ge=0)
    status: Literal["ok", "failed"] = "ok"
    error: Optional[str] = None


def trials_to_frame(trials: List[TrialRecord]) -> pd.DataFrame:
    """Flatten a trial log into one row per trial."""
    rows = []
    for trial in trials:
        cfg = trial.config
        rows.append(
            {
                "trial": trial.index,
                "status": trial.status,
                "rmse": trial.rmse,
                "n_predictions": trial.n_predictions,
                "eta": cfg.eta,
                "n_trees": cfg.n_trees,
                "window_lo": cfg.window_interval[0],
                "window_hi": cfg.window_interval[1],
                "n_lags": cfg.n_lags,
                "n_web": cfg.n_web,
                "master_seed": cfg.master_seed,
                "error": trial.error or "",
            }
        )
    return pd.DataFrame(rows)


class ReportRow(BaseModel):
    """RMSE of one method on one series."""

    model_config = ConfigDict(frozen=True)

    series: str
    method: str
    rmse: float = Field(..., ge=0.0)
    n_predictions: int = Field(..., ge=0)
    best: bool = False


class ComparisonReport(BaseModel):
    """
    Per-series, per-method RMSE table with the best method flagged.

    Attributes:
        rows: Rows in (series, method) order
        references: Optional reference scores per series, e.g. published
            upper bounds, keyed by label
    """

    rows: List[ReportRow] = Field(default_factory=list)
    references: Dict[str, Dict[str, float]] = Field(default_factory=dict)

    def series(self) -> List[str]:
        return list(dict.fromkeys(r.series for r in self.rows))

    def methods(self) -> List[str]:
        return list(dict.fromkeys(r.method for r in self.rows))

    def best_method(self, series: str) -> Optional[str]:
        for row in self.rows:
            if row.series == series and row.best:
                return row.method
        return None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.model_dump() for r in self.rows], columns=REPORT_COLUMNS)

    def to_csv(self) -> str:
        """Delimiter-separated form ``series,method,rmse,n_predictions,best``."""
        return str(self.to_frame().to_csv(index=False, lineterminator="\n"))

    def beats_references(self, series: str, rmse: float) -> bool:
        """Whether ``rmse`` is better or equal to at least one reference of ``series``."""
        refs = self.references.get(series)
        return bool(refs) and any(rmse <= value for value in refs.values())

    def to_table(self, precision: int = 3) -> str:
        """
        Human-readable layout: one row per series, methods as columns.

        The best method of a series is marked ``*``; a score better or equal
        to at least one reference value of its series is marked ``+``. Reference
        columns follow the methods.
        """
        ref_labels = list(dict.fromkeys(k for refs in self.references.values() for k in refs))
        header = ["series", *self.methods(), *ref_labels]
        lines = []
        for series in self.series():
            cells = {"series": series}
            for row in self.rows:
                if row.series != series:
                    continue
                mark = ("*" if row.best else "") + (
                    "+" if self.beats_references(series, row.rmse) else ""
                )
                cells[row.method] = f"{row.rmse:.{precision}f}{mark}"
            for label, value in self.references.get(series, {}).items():
                cells[label] = f"{value:.{precision}f}"
            lines.append([cells.get(col, "-") for col in header])
        frame = pd.DataFrame(lines, columns=header)
        return str(frame.to_string(index=False)) + "\n"

    def to_json(self) -> str:
        """Structured form mirroring the CSV rows."""
        payload: Dict[str, Any] = {
            "columns": REPORT_COLUMNS,
            "rows": [r.model_dump() for r in self.rows],
            "references": self.references,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


class RunManifest(BaseModel):
    """
    Provenance written atomically alongside every output.

    Contains no timestamps so that re-running with the same inputs yields a
    byte-identical manifest.
    """

    command: str
    version: str
    seed: Optional[int] = None
    config: Dict[str, Any] = Field(default_factory=dict)
    inputs: Dict[str, str] = Field(default_factory=dict, description="path -> sha256")
    outputs: List[str] = Field(default_factory=list)
    summary: Dict[str, Any] = Field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"
