"""
Calendar-indexed series models for nowcast-core.

Time steps are 0-based integers mapped to months through ``start``; every
algorithm works in step space, never calendar space. All models are frozen
and safe to share across readers.
"""

import math
import re
from typing import Any, Dict, Tuple

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from nowcast_core.utils.exceptions import AlignmentError, RangeError

_MONTH_PATTERN = re.compile(r"^(\d{4})-(\d{2})$")


class MonthIndex(BaseModel):
    """
    A calendar month.

    Ordered consistently with the calendar; ``successor`` adds exactly one
    month with year rollover.

    Example:
        >>> m = MonthIndex.parse("2011-12")
        >>> str(m.successor())
        '2012-01'
    """

    model_config = ConfigDict(frozen=True)

    year: int = Field(..., ge=1, le=9999, description="Calendar year")
    month: int = Field(..., ge=1, le=12, description="Month of year, 1..12")

    @classmethod
    def parse(cls, text: str) -> "MonthIndex":
        """
        Parse ``YYYY-MM``.

        Raises:
            ValueError: If the text is not a valid month
        """
        match = _MONTH_PATTERN.match(text.strip())
        if not match:
            raise ValueError(f"invalid month '{text}', expected YYYY-MM")
        year, month = int(match.group(1)), int(match.group(2))
        if not 1 <= month <= 12:
            raise ValueError(f"invalid month '{text}', month must be 01..12")
        return cls(year=year, month=month)

    @classmethod
    def from_ordinal(cls, ordinal: int) -> "MonthIndex":
        """Inverse of :attr:`ordinal`."""
        year, month0 = divmod(ordinal, 12)
        return cls(year=year, month=month0 + 1)

    @property
    def ordinal(self) -> int:
        """Months since year 0, month 1."""
        return self.year * 12 + (self.month - 1)

    def shift(self, k: int) -> "MonthIndex":
        """Month ``k`` months later (earlier when negative)."""
        return MonthIndex.from_ordinal(self.ordinal + k)

    def successor(self) -> "MonthIndex":
        """Next month."""
        return self.shift(1)

    def predecessor(self) -> "MonthIndex":
        """Previous month."""
        return self.shift(-1)

    def __lt__(self, other: "MonthIndex") -> bool:
        return self.ordinal < other.ordinal

    def __le__(self, other: "MonthIndex") -> bool:
        return self.ordinal <= other.ordinal

    def __gt__(self, other: "MonthIndex") -> bool:
        return self.ordinal > other.ordinal

    def __ge__(self, other: "MonthIndex") -> bool:
        return self.ordinal >= other.ordinal

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"


def months_between(a: MonthIndex, b: MonthIndex) -> int:
    """Number of months from ``a`` to ``b`` (negative when ``b`` precedes ``a``)."""
    return b.ordinal - a.ordinal


class UptakeSeries(BaseModel):
    """
    Monthly vaccination uptake in percent of the birth cohort.

    Values above 100 are legal: catch-up vaccination can exceed a month's
    birth cohort.

    Attributes:
        start: First month
        values: Contiguous monthly uptake values, all >= 0
    """

    model_config = ConfigDict(frozen=True)

    start: MonthIndex = Field(..., description="First month of the series")
    values: Tuple[float, ...] = Field(..., description="Uptake percent per month")

    @field_validator("values")
    @classmethod
    def values_non_negative(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        """Reject negative and non-finite uptake."""
        for i, x in enumerate(v):
            if not math.isfinite(x) or x < 0:
                raise ValueError(f"uptake at step {i} must be finite and >= 0, got {x}")
        return v

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end(self) -> MonthIndex:
        """Last month (inclusive)."""
        return self.start.shift(len(self.values) - 1)

    def month_at(self, t: int) -> MonthIndex:
        """Calendar month of step ``t``."""
        return self.start.shift(t)

    def value_at(self, t: int) -> float:
        """Uptake at step ``t``; see :func:`value_at`."""
        return value_at(self, t)

    def as_array(self) -> npt.NDArray[np.float64]:
        """Values as a float array."""
        return np.asarray(self.values, dtype=np.float64)


class QueryPanel(BaseModel):
    """
    Monthly web-search frequencies, one row per query term.

    Attributes:
        start: First month
        terms: Query-term labels, distinct, in column order
        matrix: Per-term frequency rows on the normalized [0, 100] scale
    """

    model_config = ConfigDict(frozen=True)

    start: MonthIndex = Field(..., description="First month of the panel")
    terms: Tuple[str, ...] = Field(..., description="Query-term labels")
    matrix: Tuple[Tuple[float, ...], ...] = Field(..., description="Per-term frequency rows")

    @model_validator(mode="after")
    def check_shape(self) -> "QueryPanel":
        """Rows match terms, have equal length and stay within [0, 100]."""
        if len(self.terms) != len(self.matrix):
            raise ValueError(
                f"panel has {len(self.terms)} terms but {len(self.matrix)} rows"
            )
        if len(set(self.terms)) != len(self.terms):
            raise ValueError("term labels must be distinct")
        lengths = {len(row) for row in self.matrix}
        if len(lengths) > 1:
            raise ValueError(f"term rows have unequal lengths {sorted(lengths)}")
        for term, row in zip(self.terms, self.matrix):
            for x in row:
                if not (0.0 <= x <= 100.0):
                    raise ValueError(f"frequency {x} for term '{term}' outside [0, 100]")
        return self

    def __len__(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    @property
    def end(self) -> MonthIndex:
        """Last month (inclusive)."""
        return self.start.shift(len(self) - 1)

    def as_array(self) -> npt.NDArray[np.float64]:
        """Frequencies as a (months, terms) array."""
        if not self.matrix:
            return np.zeros((0, 0), dtype=np.float64)
        return np.asarray(self.matrix, dtype=np.float64).T

    def term_index(self, label: str) -> int:
        """Column index of ``label``."""
        return self.terms.index(label)


class Dataset(BaseModel):
    """
    Aligned uptake series and query panel.

    The single source of truth for time indexing: step ``t`` is month
    ``start + t`` for both the target and the panel.

    Raises:
        AlignmentError: If uptake and panel do not cover the identical month range
    """

    model_config = ConfigDict(frozen=True)

    uptake: UptakeSeries
    panel: QueryPanel

    @model_validator(mode="after")
    def check_aligned(self) -> "Dataset":
        """Uptake and panel share start and length."""
        if self.uptake.start != self.panel.start or len(self.uptake) != len(self.panel):
            raise AlignmentError(
                "uptake and query panel cover different months",
                details={
                    "uptake": f"{self.uptake.start}..{self.uptake.end}",
                    "panel": f"{self.panel.start}..{self.panel.end}",
                },
            )
        return self

    def __len__(self) -> int:
        return len(self.uptake)

    @property
    def start(self) -> MonthIndex:
        return self.uptake.start

    @property
    def n_terms(self) -> int:
        return len(self.panel.terms)

    def month_at(self, t: int) -> MonthIndex:
        """Calendar month of step ``t``."""
        return self.uptake.month_at(t)

    def month_range(self) -> Tuple[MonthIndex, MonthIndex]:
        """See :func:`month_range`."""
        return month_range(self)

    def target(self) -> npt.NDArray[np.float64]:
        """Uptake as a float array."""
        return self.uptake.as_array()

    def web(self) -> npt.NDArray[np.float64]:
        """Panel as a (months, terms) array."""
        return self.panel.as_array()

    def slice(self, t0: int, t1: int) -> "Dataset":
        """
        Sub-dataset over steps ``[t0, t1)``.

        Raises:
            RangeError: If the range is empty or outside the dataset
        """
        if not 0 <= t0 < t1 <= len(self):
            raise RangeError(
                "slice outside dataset",
                details={"t0": t0, "t1": t1, "length": len(self)},
            )
        start = self.start.shift(t0)
        return Dataset(
            uptake=UptakeSeries(start=start, values=self.uptake.values[t0:t1]),
            panel=QueryPanel(
                start=start,
                terms=self.panel.terms,
                matrix=tuple(row[t0:t1] for row in self.panel.matrix),
            ),
        )

    def describe(self) -> Dict[str, Any]:
        """Short summary used in log events."""
        first, last = month_range(self)
        return {"first": str(first), "last": str(last), "months": len(self), "terms": self.n_terms}


def month_range(ds: Dataset) -> Tuple[MonthIndex, MonthIndex]:
    """
    Inclusive first and last month of a dataset.

    Example:
        >>> month_range(ds)  # 66 months from 2011-01
        (MonthIndex(year=2011, month=1), MonthIndex(year=2016, month=6))
    """
    return ds.uptake.start, ds.uptake.end


def value_at(series: UptakeSeries, t: int) -> float:
    """
    Uptake at step ``t`` (``t = 0`` is the first month).

    Raises:
        RangeError: If ``t`` is outside ``[0, len(series))``
    """
    if not 0 <= t < len(series.values):
        raise RangeError(
            "time step out of range",
            details={"t": t, "length": len(series.values)},
        )
    return series.values[t]
