"""
Utility modules for nowcast-core.

Modules:
    exceptions: Custom exception hierarchy
    logging: Structured logging configuration
    validation: Input validation helpers
    atomic: Atomic file output and digests
    async_utils: Async/await utilities
    config: Configuration loading and saving (import directly from
        ``nowcast_core.utils.config``; it depends on the models package)
"""

from nowcast_core.utils.atomic import atomic_write_text, file_digest
from nowcast_core.utils.exceptions import (
    AlignmentError,
    ConfigError,
    DataError,
    DataValueError,
    FormatError,
    GapError,
    InsufficientHistoryError,
    NowcastError,
    ParameterError,
    ProtocolError,
    RangeError,
    RegistryError,
    ShapeError,
)
from nowcast_core.utils.logging import get_logger, log_error, setup_logging
from nowcast_core.utils.validation import (
    as_vector,
    validate_finite,
    validate_interval,
    validate_range,
)

__all__ = [
    # Exceptions
    "NowcastError",
    "ConfigError",
    "ParameterError",
    "DataError",
    "FormatError",
    "GapError",
    "DataValueError",
    "AlignmentError",
    "InsufficientHistoryError",
    "ShapeError",
    "RangeError",
    "ProtocolError",
    "RegistryError",
    # Logging
    "setup_logging",
    "get_logger",
    "log_error",
    # Validation
    "validate_range",
    "validate_interval",
    "validate_finite",
    "as_vector",
    # Files
    "atomic_write_text",
    "file_digest",
]
