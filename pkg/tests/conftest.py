"""Pytest configuration and shared fixtures."""

from pathlib import Path
from typing import Tuple

import pytest

from nowcast_core.data.synthgen import generate, preset
from nowcast_core.models.config import BaselineConfig, EstimatorConfig
from nowcast_core.models.timeseries import Dataset
from tests.fixtures.sample_data import (
    create_small_baseline,
    create_small_config,
    write_dataset,
)


@pytest.fixture
def constant_dataset() -> Dataset:
    """60 months of uptake at 75 with two flat query terms."""
    return generate(preset("constant"))


@pytest.fixture
def drop_dataset() -> Dataset:
    """Regime-drop scenario: level 90 falls to 60 at step 40."""
    return generate(preset("regime_drop", seed=1))


@pytest.fixture
def small_config() -> EstimatorConfig:
    return create_small_config()


@pytest.fixture
def small_baseline() -> BaselineConfig:
    return create_small_baseline()


@pytest.fixture
def drop_files(tmp_path: Path, drop_dataset: Dataset) -> Tuple[Path, Path]:
    """Uptake and query CSVs of the regime-drop scenario."""
    return write_dataset(drop_dataset, tmp_path, prefix="drop")


@pytest.fixture
def constant_files(tmp_path: Path, constant_dataset: Dataset) -> Tuple[Path, Path]:
    return write_dataset(constant_dataset, tmp_path, prefix="constant")


@pytest.fixture
def small_config_file(tmp_path: Path) -> Path:
    """Flat ``key = value`` estimator config with a small ensemble."""
    path = tmp_path / "atse.cfg"
    path.write_text(
        "\n".join(
            [
                "# small ensemble for tests",
                "eta = 0.05",
                "n_trees = 8",
                "window_interval = 1:12",
                "n_lags = 2",
                "n_web = 1",
                "master_seed = 5",
            ]
        )
        + "\n",
        encoding="utf-8",
    )
    return path
