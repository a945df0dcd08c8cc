"""
Seeded synthetic datasets.

Generates non-stationary monthly uptake series with a correlated query panel,
emulating the irregularities seen in real uptake data: a media-scare drop, a
supply shortage with recovery and schedule drift, plus a stationary control.

The random stream is numpy's PCG64 bit generator seeded with the scenario
seed (``GENERATOR_ALGORITHM``). Draw order is fixed: the target noise vector
first, then one noise vector per query term in column order.
"""

from typing import Dict

import numpy as np
import numpy.typing as npt

from nowcast_core.models.scenario import Scenario
from nowcast_core.models.timeseries import Dataset, QueryPanel, UptakeSeries
from nowcast_core.utils.logging import get_logger

logger = get_logger(__name__)

GENERATOR_ALGORITHM = "numpy-PCG64/normal-v1"
SEASONAL_PERIOD = 12


def _levels(sc: Scenario) -> npt.NDArray[np.float64]:
    level = np.full(sc.length, sc.base_level, dtype=np.float64)
    for step, new_level in sc.change_points:
        level[step:] = new_level
    return level


def _rescale(signal: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    lo, hi = float(signal.min()), float(signal.max())
    if hi == lo:
        return np.full_like(signal, 50.0)
    return (signal - lo) / (hi - lo) * 100.0


def generate(sc: Scenario) -> Dataset:
    """
    Generate the dataset described by ``sc``.

    Target: piecewise level + 12-month sinusoid + Gaussian noise, floored at 0.
    Each query term: the source signal shifted ``term_lag`` months earlier
    (the last months repeat the final value), rescaled affinely onto
    [0, 100], plus term noise clipped back into [0, 100]. The source signal is
    the target itself, or the target without its level changes when
    ``terms_track_level`` is false.

    Returns:
        Fully seed-determined dataset

    Example:
        >>> ds = generate(Scenario(length=12, base_level=80.0))
        >>> set(ds.uptake.values)
        {80.0}
    """
    rng = np.random.default_rng(sc.seed)
    t = np.arange(sc.length, dtype=np.float64)
    seasonal = sc.seasonal_amplitude * np.sin(2.0 * np.pi * t / SEASONAL_PERIOD)
    noise = rng.normal(0.0, sc.noise_std, sc.length) if sc.noise_std > 0 else np.zeros(sc.length)

    target = np.maximum(_levels(sc) + seasonal + noise, 0.0)
    if sc.terms_track_level:
        source = target
    else:
        source = np.maximum(sc.base_level + seasonal + noise, 0.0)

    if sc.term_lag > 0:
        lead = np.minimum(np.arange(sc.length) + sc.term_lag, sc.length - 1)
        source = source[lead]
    base = _rescale(source)

    rows = []
    for _ in range(sc.n_terms):
        if sc.term_noise_std > 0:
            term = np.clip(base + rng.normal(0.0, sc.term_noise_std, sc.length), 0.0, 100.0)
        else:
            term = base
        rows.append(tuple(float(x) for x in term))

    logger.debug(
        "scenario_generated",
        length=sc.length,
        change_points=len(sc.change_points),
        seed=sc.seed,
        algorithm=GENERATOR_ALGORITHM,
    )
    return Dataset(
        uptake=UptakeSeries(start=sc.start, values=tuple(float(x) for x in target)),
        panel=QueryPanel(
            start=sc.start,
            terms=tuple(f"q{j + 1}" for j in range(sc.n_terms)),
            matrix=tuple(rows),
        ),
    )


def preset(name: str, seed: int = 0) -> Scenario:
    """
    Canonical scenario by name with the given seed.

    Raises:
        KeyError: If the preset is unknown
    """
    return PRESETS[name].model_copy(update={"seed": seed})


def decouple_queries(sc: Scenario) -> Scenario:
    """
    Variant of ``sc`` whose query terms ignore the level changes.

    The terms keep the seasonality and noise of the target, so the
    query-to-uptake relation breaks at every change point.

    Example:
        >>> sc = decouple_queries(preset("media_scare", seed=2))
        >>> sc.terms_track_level
        False
    """
    return sc.model_copy(update={"terms_track_level": False})


# Canonical scenarios: 80 months, shifts of 20+ percentage points at step 40.
# Query terms track the target; see decouple_queries for the broken-relation variant.
PRESETS: Dict[str, Scenario] = {
    "regime_drop": Scenario(
        length=80,
        base_level=90.0,
        seasonal_amplitude=4.0,
        change_points=((40, 60.0),),
        noise_std=1.5,
        n_terms=3,
        term_lag=1,
        term_noise_std=4.0,
    ),
    "regime_rise": Scenario(
        length=80,
        base_level=60.0,
        seasonal_amplitude=4.0,
        change_points=((40, 85.0),),
        noise_std=1.5,
        n_terms=3,
        term_lag=1,
        term_noise_std=4.0,
    ),
    "supply_shortage": Scenario(
        length=80,
        base_level=95.0,
        seasonal_amplitude=3.0,
        change_points=((40, 70.0), (56, 95.0)),
        noise_std=1.5,
        n_terms=3,
        term_lag=0,
        term_noise_std=4.0,
    ),
    "schedule_drift": Scenario(
        length=80,
        base_level=85.0,
        seasonal_amplitude=6.0,
        change_points=((40, 62.0), (60, 50.0)),
        noise_std=2.0,
        n_terms=4,
        term_lag=2,
        term_noise_std=5.0,
    ),
    "media_scare": Scenario(
        length=80,
        base_level=80.0,
        seasonal_amplitude=2.0,
        change_points=((40, 45.0), (64, 55.0)),
        noise_std=2.0,
        n_terms=3,
        term_lag=0,
        term_noise_std=3.0,
    ),
    "stationary": Scenario(
        length=80,
        base_level=90.0,
        seasonal_amplitude=6.0,
        noise_std=1.5,
        n_terms=3,
        term_lag=0,
        term_noise_std=3.0,
    ),
    "constant": Scenario(length=60, base_level=75.0, n_terms=2),
}

REGIME_SHIFT_PRESETS = (
    "regime_drop",
    "regime_rise",
    "supply_shortage",
    "schedule_drift",
    "media_scare",
)
