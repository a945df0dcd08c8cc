"""
Abstract interfaces for nowcast-core.

Modules:
    method: EstimationMethod - contract of a walk-forward estimation method
"""

from nowcast_core.interfaces.method import EstimationMethod

__all__ = ["EstimationMethod"]
