"""
Synthetic scenario model.

Describes a seeded non-stationary monthly dataset: piecewise level with
change points, yearly seasonality, Gaussian noise and a query panel that
leads the target.
"""

from typing import Any, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from nowcast_core.models.timeseries import MonthIndex


class Scenario(BaseModel):
    """
    Synthetic dataset recipe.

    Attributes:
        length: Number of months
        base_level: Level before the first change point, in percent
        seasonal_amplitude: Amplitude of the 12-month sinusoid
        change_points: ``(step, new_level)`` pairs, steps strictly increasing
        noise_std: Target noise standard deviation
        n_terms: Number of query terms
        term_lag: Months the query signal leads the target
        term_noise_std: Query noise standard deviation (frequency units)
        terms_track_level: When false, queries follow seasonality and noise
            but not the level changes, so the query-to-uptake relation breaks
            at every change point
        start: First month
        seed: Generator seed

    Example:
        >>> sc = Scenario(length=80, base_level=90.0, change_points=((40, 60.0),), seed=1)
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    length: int = Field(default=80, ge=1)
    base_level: float = Field(default=90.0, ge=0.0)
    seasonal_amplitude: float = Field(default=0.0, ge=0.0)
    change_points: Tuple[Tuple[int, float], ...] = ()
    noise_std: float = Field(default=0.0, ge=0.0)
    n_terms: int = Field(default=3, ge=1)
    term_lag: int = Field(default=0, ge=0)
    term_noise_std: float = Field(default=0.0, ge=0.0)
    terms_track_level: bool = True
    start: MonthIndex = Field(default_factory=lambda: MonthIndex(year=2011, month=1))
    seed: int = Field(default=0, ge=0)

    @field_validator("start", mode="before")
    @classmethod
    def parse_start(cls, v: Any) -> Any:
        """Accept ``YYYY-MM`` text."""
        if isinstance(v, str):
            return MonthIndex.parse(v)
        return v

    @model_validator(mode="after")
    def check_change_points(self) -> "Scenario":
        """Change-point steps are strictly increasing and inside the series."""
        previous = -1
        for step, level in self.change_points:
            if step <= previous:
                raise ValueError("change point steps must be strictly increasing")
            if not 0 <= step < self.length:
                raise ValueError(f"change point step {step} outside [0, {self.length})")
            if level < 0:
                raise ValueError("change point levels must be >= 0")
            previous = step
        return self
