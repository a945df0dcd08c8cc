"""Tests for TrialExecutor."""

import time

import pytest

from nowcast_core.base.executor import TrialExecutor
from nowcast_core.models.results import TrialRecord
from tests.fixtures.sample_data import create_small_config


def _evaluate(index, cfg):
    # Later trials finish first.
    time.sleep(0.01 * (3 - index))
    return TrialRecord(index=index, config=cfg, rmse=float(index))


class TestTrialExecutor:
    """Tests for TrialExecutor."""

    @pytest.fixture
    def candidates(self):
        cfg = create_small_config()
        return [(i, cfg) for i in range(4)]

    async def test_results_ordered_by_index(self, candidates):
        """Test the log is ordered by trial index regardless of completion order."""
        executor = TrialExecutor(max_concurrent=4)
        records = await executor.execute(candidates, _evaluate)
        assert [r.index for r in records] == [0, 1, 2, 3]
        assert [r.rmse for r in records] == [0.0, 1.0, 2.0, 3.0]

    async def test_exception_becomes_failed_record(self, candidates):
        """Test an exception in one trial does not abort the others."""

        def flaky(index, cfg):
            if index == 2:
                raise RuntimeError("boom")
            return TrialRecord(index=index, config=cfg, rmse=1.0)

        executor = TrialExecutor(max_concurrent=2)
        records = await executor.execute(candidates, flaky)
        assert records[2].status == "failed"
        assert records[2].error == "boom"
        assert records[2].rmse == float("inf")
        assert [r.status for r in records].count("ok") == 3

    async def test_empty_candidates(self):
        """Test no candidates gives an empty log without a history entry."""
        executor = TrialExecutor()
        assert await executor.execute([], _evaluate) == []
        assert executor.get_statistics() == {"total_executions": 0}

    async def test_statistics(self, candidates):
        """Test statistics accumulate across executions."""

        def half(index, cfg):
            if index % 2:
                raise ValueError("odd")
            return TrialRecord(index=index, config=cfg, rmse=0.5)

        executor = TrialExecutor(max_concurrent=3)
        await executor.execute(candidates, half)
        await executor.execute(candidates[:2], half)
        stats = executor.get_statistics()
        assert stats["total_executions"] == 2
        assert stats["total_trials"] == 6
        assert stats["successful"] == 3
        assert stats["failed"] == 3
        assert stats["success_rate"] == 0.5

    def test_concurrency_floor(self):
        """Test max_concurrent is at least one."""
        assert TrialExecutor(max_concurrent=0).max_concurrent == 1
