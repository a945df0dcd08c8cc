"""
Estimation method interface.

Defines the contract shared by the adaptive estimator and the linear
baselines so that comparisons and the command line can treat them alike.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, Optional

from nowcast_core.models.results import EstimationTrace
from nowcast_core.models.timeseries import Dataset


class EstimationMethod(ABC):
    """
    Abstract walk-forward estimation method.

    Implementations predict every step from their first predicted step to the
    end of a dataset, training only on data strictly before each step.

    Example:
        >>> class LastValue(EstimationMethod):
        ...     name = "last"
        ...     def run(self, ds, series=None):
        ...         ...
        ...     def describe(self):
        ...         return {"name": self.name}
    """

    name: str = ""

    @abstractmethod
    def run(self, ds: Dataset, series: Optional[str] = None) -> EstimationTrace:
        """
        Walk-forward run over ``ds``.

        Args:
            ds: Dataset
            series: Label stored on the trace

        Returns:
            Trace of every predicted step

        Raises:
            NowcastError: If the method cannot run on ``ds``
        """
        pass

    @abstractmethod
    def describe(self) -> Dict[str, Any]:
        """
        JSON-serializable description of the method and its configuration.

        Used in run manifests.
        """
        pass

    @property
    def first_step(self) -> Optional[int]:
        """First predicted step, if known before running."""
        return None
