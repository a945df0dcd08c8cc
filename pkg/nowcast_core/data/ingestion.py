"""
CSV ingestion for uptake series and query panels.

Two uptake schemas are accepted::

    month,vaccinated,birth_cohort      (raw counts, uptake = 100 * vaccinated / birth_cohort)
    month,uptake_percent               (pre-computed)

and one query schema::

    month,<term1>,<term2>,...

Validation is strict: nothing is clamped or imputed. Errors carry the
1-based line number in ``details["line"]``.
"""

import csv
import io
import math
from pathlib import Path
from typing import Iterator, List, Optional, TextIO, Tuple, Union

import numpy as np

from nowcast_core.models.ingest import IngestReport
from nowcast_core.models.timeseries import Dataset, MonthIndex, QueryPanel, UptakeSeries
from nowcast_core.utils.exceptions import (
    AlignmentError,
    DataValueError,
    FormatError,
    GapError,
)
from nowcast_core.utils.logging import get_logger

logger = get_logger(__name__)

RAW_HEADER = ["month", "vaccinated", "birth_cohort"]
PERCENT_HEADER = ["month", "uptake_percent"]

Source = Union[str, TextIO]


def _rows(text: Source) -> Iterator[Tuple[int, List[str]]]:
    """Yield ``(line_number, fields)`` for non-blank lines."""
    handle = io.StringIO(text.lstrip("\ufeff")) if isinstance(text, str) else text
    reader = csv.reader(handle, delimiter=",")
    for fields in reader:
        if not fields or all(not f.strip() for f in fields):
            continue
        yield reader.line_num, [f.strip() for f in fields]


def _parse_month(value: str, line: int) -> MonthIndex:
    try:
        return MonthIndex.parse(value)
    except ValueError as e:
        raise FormatError(str(e), details={"line": line, "value": value}, cause=e)


def _parse_number(value: str, line: int, column: str) -> float:
    try:
        number = float(value)
    except ValueError as e:
        raise FormatError(
            f"column '{column}' is not numeric",
            details={"line": line, "value": value},
            cause=e,
        )
    if not math.isfinite(number):
        raise DataValueError(
            f"column '{column}' must be finite",
            details={"line": line, "value": value},
        )
    return number


def _check_contiguous(previous: Optional[MonthIndex], month: MonthIndex, line: int) -> None:
    if previous is not None and month.ordinal != previous.ordinal + 1:
        raise GapError(
            "months are not contiguous",
            details={"line": line, "previous": str(previous), "month": str(month)},
        )


def _check_width(fields: List[str], width: int, line: int) -> None:
    if len(fields) != width:
        raise FormatError(
            "ragged row",
            details={"line": line, "expected_fields": width, "fields": len(fields)},
        )


def parse_uptake_csv(text: Source, report: Optional[IngestReport] = None) -> UptakeSeries:
    """
    Parse an uptake CSV in raw-count or pre-computed form.

    Args:
        text: CSV text or an open text stream
        report: Optional report receiving row counts and warnings

    Returns:
        Contiguous uptake series

    Raises:
        FormatError: Missing/unknown header, ragged row, bad month or number
        GapError: Months not strictly increasing and contiguous
        DataValueError: ``birth_cohort <= 0``, ``vaccinated < 0`` or negative uptake

    Example:
        >>> parse_uptake_csv("month,vaccinated,birth_cohort\\n2011-01,500,1000").values
        (50.0,)
    """
    rows = _rows(text)
    try:
        header_line, header = next(rows)
    except StopIteration:
        raise FormatError("missing header", details={"line": 1})

    header = [h.lower() for h in header]
    if header == RAW_HEADER:
        raw = True
    elif header == PERCENT_HEADER:
        raw = False
    else:
        raise FormatError(
            "unrecognized uptake header",
            details={
                "line": header_line,
                "header": ",".join(header),
                "expected": [",".join(RAW_HEADER), ",".join(PERCENT_HEADER)],
            },
        )

    start: Optional[MonthIndex] = None
    previous: Optional[MonthIndex] = None
    values: List[float] = []
    for line, fields in rows:
        _check_width(fields, len(header), line)
        month = _parse_month(fields[0], line)
        _check_contiguous(previous, month, line)
        if raw:
            vaccinated = _parse_number(fields[1], line, "vaccinated")
            cohort = _parse_number(fields[2], line, "birth_cohort")
            if cohort <= 0:
                raise DataValueError(
                    "birth_cohort must be positive", details={"line": line, "value": cohort}
                )
            if vaccinated < 0:
                raise DataValueError(
                    "vaccinated must be non-negative",
                    details={"line": line, "value": vaccinated},
                )
            uptake = 100.0 * vaccinated / cohort
        else:
            uptake = _parse_number(fields[1], line, "uptake_percent")
            if uptake < 0:
                raise DataValueError(
                    "uptake_percent must be non-negative",
                    details={"line": line, "value": uptake},
                )
        if report is not None and uptake > 100.0:
            report.warn(f"line {line}: uptake {uptake:g} exceeds 100 percent")
        start = start or month
        previous = month
        values.append(uptake)

    if start is None:
        raise FormatError("no data rows", details={"line": header_line + 1})

    if report is not None:
        report.rows_read += len(values)
    logger.debug("uptake_parsed", start=str(start), months=len(values), raw=raw)
    return UptakeSeries(start=start, values=tuple(values))


def parse_query_csv(text: Source, report: Optional[IngestReport] = None) -> QueryPanel:
    """
    Parse a query-frequency CSV with one column per term.

    Args:
        text: CSV text or an open text stream
        report: Optional report receiving row counts and warnings

    Returns:
        Panel with terms in header order

    Raises:
        FormatError: Missing header, no terms, duplicate term labels, ragged rows
        GapError: Months not contiguous
        DataValueError: Any frequency outside [0, 100]

    Example:
        >>> parse_query_csv("month,hpv\\n2011-01,37.5").terms
        ('hpv',)
    """
    rows = _rows(text)
    try:
        header_line, header = next(rows)
    except StopIteration:
        raise FormatError("missing header", details={"line": 1})

    if not header or header[0].lower() != "month":
        raise FormatError(
            "query header must start with 'month'",
            details={"line": header_line, "header": ",".join(header)},
        )
    terms = header[1:]
    if not terms:
        raise FormatError("query header names no terms", details={"line": header_line})
    if any(not t for t in terms):
        raise FormatError("empty term label", details={"line": header_line})
    seen = set()
    for term in terms:
        if term in seen:
            raise FormatError(
                "duplicate term label", details={"line": header_line, "term": term}
            )
        seen.add(term)

    start: Optional[MonthIndex] = None
    previous: Optional[MonthIndex] = None
    columns: List[List[float]] = [[] for _ in terms]
    for line, fields in rows:
        _check_width(fields, len(header), line)
        month = _parse_month(fields[0], line)
        _check_contiguous(previous, month, line)
        for j, (term, raw_value) in enumerate(zip(terms, fields[1:])):
            value = _parse_number(raw_value, line, term)
            if not 0.0 <= value <= 100.0:
                raise DataValueError(
                    "frequency outside [0, 100]",
                    details={"line": line, "term": term, "value": value},
                )
            columns[j].append(value)
        start = start or month
        previous = month

    if start is None:
        raise FormatError("no data rows", details={"line": header_line + 1})

    if report is not None:
        report.rows_read += len(columns[0])
        for term, column in zip(terms, columns):
            if len(column) > 1 and float(np.ptp(column)) == 0.0:
                report.warn(f"term '{term}' has zero variance")
    logger.debug("queries_parsed", start=str(start), months=len(columns[0]), terms=len(terms))
    return QueryPanel(start=start, terms=tuple(terms), matrix=tuple(tuple(c) for c in columns))


def _format_number(value: float) -> str:
    return repr(float(value))


def serialize_uptake_csv(series: UptakeSeries) -> str:
    """Pre-computed-form CSV; inverse of :func:`parse_uptake_csv`."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(PERCENT_HEADER)
    for t, value in enumerate(series.values):
        writer.writerow([str(series.month_at(t)), _format_number(value)])
    return out.getvalue()


def serialize_query_csv(panel: QueryPanel) -> str:
    """Query CSV; inverse of :func:`parse_query_csv`."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["month", *panel.terms])
    for t in range(len(panel)):
        month = panel.start.shift(t)
        writer.writerow([str(month), *(_format_number(row[t]) for row in panel.matrix)])
    return out.getvalue()


def align(uptake: UptakeSeries, panel: QueryPanel) -> Dataset:
    """
    Restrict both inputs to their common months.

    Raises:
        AlignmentError: If the month ranges do not overlap

    Example:
        >>> align(uptake_2011, panel_2011_06_to_2012_06).month_range()  # 2011-06..2011-12
    """
    first = max(uptake.start.ordinal, panel.start.ordinal)
    last = min(uptake.end.ordinal, panel.end.ordinal)
    if first > last:
        raise AlignmentError(
            "uptake and query ranges do not overlap",
            details={
                "uptake": f"{uptake.start}..{uptake.end}",
                "panel": f"{panel.start}..{panel.end}",
            },
        )

    start = MonthIndex.from_ordinal(first)
    u0 = first - uptake.start.ordinal
    p0 = first - panel.start.ordinal
    n = last - first + 1
    if n < len(uptake) or n < len(panel):
        logger.info(
            "inputs_trimmed_to_overlap",
            uptake=f"{uptake.start}..{uptake.end}",
            panel=f"{panel.start}..{panel.end}",
            months=n,
        )
    return Dataset(
        uptake=UptakeSeries(start=start, values=uptake.values[u0 : u0 + n]),
        panel=QueryPanel(
            start=start,
            terms=panel.terms,
            matrix=tuple(row[p0 : p0 + n] for row in panel.matrix),
        ),
    )


def _read_text(path: Union[str, Path]) -> str:
    """Decode a CSV file as UTF-8, dropping a leading byte-order mark."""
    data = Path(path).read_bytes()
    try:
        return data.decode("utf-8-sig")
    except UnicodeDecodeError as e:
        raise FormatError(
            "file is not valid UTF-8",
            details={"file": str(path), "line": data[: e.start].count(b"\n") + 1},
            cause=e,
        )


def read_dataset(
    uptake_path: Union[str, Path],
    queries_path: Union[str, Path],
) -> Tuple[Dataset, IngestReport]:
    """
    Read, validate and align an uptake CSV and a query CSV.

    Returns:
        The aligned dataset and an ingestion report

    Raises:
        FormatError: If a file is not valid UTF-8 or breaks its schema
    """
    report = IngestReport()
    uptake = parse_uptake_csv(_read_text(uptake_path), report)
    panel = parse_query_csv(_read_text(queries_path), report)
    ds = align(uptake, panel)
    for warning in report.warnings:
        logger.warning("ingest_warning", message=warning)
    logger.info("dataset_loaded", rows_read=report.rows_read, **ds.describe())
    return ds, report
