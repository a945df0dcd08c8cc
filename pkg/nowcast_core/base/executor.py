"""
Trial executor.

Evaluates random-search trials with bounded concurrency. Each trial runs in
the default thread executor; the log is returned in trial-index order no
matter in which order trials finish.
"""

import math
from typing import Any, Callable, Dict, List, Sequence, Tuple

from nowcast_core.models.config import EstimatorConfig
from nowcast_core.models.results import TrialRecord
from nowcast_core.utils.async_utils import gather_with_concurrency, run_in_executor
from nowcast_core.utils.logging import get_logger

logger = get_logger(__name__)

TrialFn = Callable[[int, EstimatorConfig], TrialRecord]


class TrialExecutor:
    """
    Runs trials concurrently and keeps execution statistics.

    Example:
        >>> executor = TrialExecutor(max_concurrent=4)
        >>> log = await executor.execute(candidates, evaluate)
    """

    def __init__(self, max_concurrent: int = 4):
        """
        Initialize trial executor.

        Args:
            max_concurrent: Maximum trials evaluated at once
        """
        self.max_concurrent = max(1, max_concurrent)
        self.execution_history: List[Dict[str, Any]] = []

        logger.debug("trial_executor_initialized", max_concurrent=self.max_concurrent)

    async def execute(
        self,
        candidates: Sequence[Tuple[int, EstimatorConfig]],
        evaluate: TrialFn,
    ) -> List[TrialRecord]:
        """
        Evaluate every candidate.

        Args:
            candidates: ``(trial index, config)`` pairs
            evaluate: Blocking trial evaluation

        Returns:
            Trial records ordered by trial index
        """
        if not candidates:
            return []

        tasks = [self._execute_single(index, cfg, evaluate) for index, cfg in candidates]
        results = await gather_with_concurrency(self.max_concurrent, *tasks)
        records = sorted(results, key=lambda r: r.index)
        self._log_execution(records)
        return records

    async def _execute_single(
        self, index: int, cfg: EstimatorConfig, evaluate: TrialFn
    ) -> TrialRecord:
        try:
            return await run_in_executor(evaluate, index, cfg)
        except Exception as e:
            logger.error("trial_execution_failed", trial=index, error=str(e))
            return TrialRecord(
                index=index, config=cfg, rmse=math.inf, status="failed", error=str(e)
            )

    def _log_execution(self, records: List[TrialRecord]) -> None:
        execution_record = {
            "trials": len(records),
            "successful": sum(1 for r in records if r.status == "ok"),
            "failed": sum(1 for r in records if r.status == "failed"),
        }
        self.execution_history.append(execution_record)
        logger.info("trials_executed", **execution_record)

    def get_statistics(self) -> Dict[str, Any]:
        """
        Get execution statistics.

        Returns:
            Dict with statistics
        """
        if not self.execution_history:
            return {"total_executions": 0}

        total = sum(e["trials"] for e in self.execution_history)
        successful = sum(e["successful"] for e in self.execution_history)
        return {
            "total_executions": len(self.execution_history),
            "total_trials": total,
            "successful": successful,
            "failed": total - successful,
            "success_rate": successful / total if total > 0 else 0,
        }
