"""
Data input and synthesis.

Modules:
    ingestion: CSV parsing, serialization and alignment
    synthgen: Seeded generator of non-stationary datasets
"""

from nowcast_core.data.ingestion import (
    align,
    parse_query_csv,
    parse_uptake_csv,
    read_dataset,
    serialize_query_csv,
    serialize_uptake_csv,
)
from nowcast_core.data.synthgen import (
    GENERATOR_ALGORITHM,
    PRESETS,
    decouple_queries,
    generate,
    preset,
)

__all__ = [
    "parse_uptake_csv",
    "parse_query_csv",
    "serialize_uptake_csv",
    "serialize_query_csv",
    "align",
    "read_dataset",
    "generate",
    "preset",
    "decouple_queries",
    "PRESETS",
    "GENERATOR_ALGORITHM",
]
