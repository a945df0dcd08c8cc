"""
Custom exceptions for nowcast-core.

Defines a hierarchy of exceptions for better error handling. Errors that
describe a bad argument or a bad index also derive from the matching builtin
so generic callers can catch ``ValueError`` / ``IndexError``.
"""

from typing import Any, Dict, Optional


class NowcastError(Exception):
    """
    Base exception for all nowcast-core errors.

    Attributes:
        message: Error message
        details: Additional error details
        cause: Original exception that caused this error
    """

    def __init__(
        self,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        cause: Optional[BaseException] = None,
    ):
        """
        Initialize nowcast error.

        Args:
            message: Error message
            details: Additional error details
            cause: Original exception
        """
        self.message = message
        self.details = details or {}
        self.cause = cause
        super().__init__(self.message)

    def __str__(self) -> str:
        """String representation of error."""
        if self.details:
            return f"{self.message} | Details: {self.details}"
        return self.message

    def __repr__(self) -> str:
        """Developer-friendly representation."""
        return f"{self.__class__.__name__}(message='{self.message}', details={self.details})"


class ConfigError(NowcastError):
    """
    Configuration-related errors.

    Raised when a configuration file is missing, unreadable, has unknown keys
    or fails validation.

    Example:
        >>> raise ConfigError("Unknown config key", details={"key": "etta"})
    """

    pass


class ParameterError(NowcastError, ValueError):
    """
    Invalid argument passed to an operation.

    Example:
        >>> raise ParameterError("k_w exceeds term count", details={"k_w": 5, "terms": 3})
    """

    pass


class DataError(NowcastError):
    """Base class for problems with input data."""

    pass


class FormatError(DataError):
    """
    Malformed CSV input (header, ragged rows, duplicate terms, bad month syntax).

    ``details["line"]`` carries the 1-based line number when known.
    """

    pass


class GapError(DataError):
    """Months are not strictly increasing and contiguous."""

    pass


class DataValueError(DataError, ValueError):
    """
    A data value is outside its legal range or not a finite number.

    Example:
        >>> raise DataValueError("Frequency outside [0, 100]", details={"line": 3, "value": 101.0})
    """

    pass


class AlignmentError(DataError):
    """Uptake series and query panel cannot be aligned."""

    pass


class InsufficientHistoryError(DataError):
    """
    Not enough observed steps for the requested lags, window or warmup.

    Example:
        >>> raise InsufficientHistoryError("No lagged history", details={"t": 1, "n_lags": 2})
    """

    pass


class ShapeError(NowcastError, ValueError):
    """Length or shape mismatch between vectors."""

    pass


class RangeError(NowcastError, IndexError):
    """Time-step index outside the series."""

    pass


class ProtocolError(NowcastError):
    """
    Streaming estimator calls out of order.

    Raised when ``step_predict`` is called twice without ``step_observe`` or
    ``step_observe`` is called with no pending prediction.
    """

    pass


class RegistryError(NowcastError):
    """
    Registry-related errors.

    Example:
        >>> raise RegistryError("Method not found", details={"name": "arima"})
    """

    pass
