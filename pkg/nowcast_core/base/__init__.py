"""
Base implementations for nowcast-core.

Modules:
    executor: TrialExecutor - bounded-concurrency trial evaluation
    methods: Built-in estimation methods ``atse``, ``lasso`` and ``enet``
        (import from ``nowcast_core.base.methods``; they depend on the
        evaluation package)
"""

from nowcast_core.base.executor import TrialExecutor

__all__ = ["TrialExecutor"]
