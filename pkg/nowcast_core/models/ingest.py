"""
Ingestion report model.
"""

from typing import List

from pydantic import BaseModel, Field


class IngestReport(BaseModel):
    """
    Summary of a CSV ingestion.

    Attributes:
        rows_read: Data rows consumed across all parsed files
        warnings: Human-readable notes on legal-but-suspicious input

    Example:
        >>> report = IngestReport()
        >>> report.warn("term 'hpv' has zero variance")
    """

    rows_read: int = Field(default=0, ge=0, description="Data rows read")
    warnings: List[str] = Field(default_factory=list, description="Ingestion warnings")

    def warn(self, message: str) -> None:
        """Record a warning."""
        self.warnings.append(message)
