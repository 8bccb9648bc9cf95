"""
Unit tests for the batch processor
"""

import threading
import time

import pytest

from batch.batch_processor import BatchProcessor, BatchProgress


class TestBatchProcessor:
    """Test suite for BatchProcessor"""

    @pytest.mark.asyncio
    async def test_results_in_payload_order(self):
        """Test jobs come back sorted by payload index"""
        processor = BatchProcessor(max_concurrent=3)

        def worker(x):
            time.sleep(0.01 * (5 - x))
            return x * x

        jobs = await processor.process_batch([0, 1, 2, 3, 4], worker, batch_name="squares")

        assert [job.result for job in jobs] == [0, 1, 4, 9, 16]
        assert all(job.status == "completed" for job in jobs)
        assert processor.progress.completed == 5
        assert jobs[0].job_id == "squares_1"

    @pytest.mark.asyncio
    async def test_concurrency_bound(self):
        """Test no more than max_concurrent workers overlap"""
        processor = BatchProcessor(max_concurrent=2)
        lock = threading.Lock()
        active = {"now": 0, "peak": 0}

        def worker(_):
            with lock:
                active["now"] += 1
                active["peak"] = max(active["peak"], active["now"])
            time.sleep(0.02)
            with lock:
                active["now"] -= 1

        await processor.process_batch(range(6), worker)
        assert active["peak"] <= 2

    @pytest.mark.asyncio
    async def test_failures_recorded(self):
        """Test a raising worker marks its job failed and the rest complete"""
        processor = BatchProcessor(max_concurrent=2)

        def worker(x):
            if x == 1:
                raise ValueError("bad cell")
            return x

        jobs = await processor.process_batch([0, 1, 2], worker)

        assert [job.status for job in jobs] == ["completed", "failed", "completed"]
        assert isinstance(jobs[1].error, ValueError)
        assert processor.failed_jobs == [jobs[1]]
        assert processor.progress.failed == 1
        assert jobs[0].duration is not None

    @pytest.mark.asyncio
    async def test_fail_fast_skips_pending(self):
        """Test a failure with fail_fast skips the jobs not yet started"""
        processor = BatchProcessor(max_concurrent=1, fail_fast=True)
        calls = []

        def worker(x):
            calls.append(x)
            if x == 1:
                raise RuntimeError("diverged")
            return x

        jobs = await processor.process_batch([0, 1, 2, 3], worker)

        assert calls == [0, 1]
        assert [job.status for job in jobs] == ["completed", "failed", "skipped", "skipped"]
        assert jobs[2].duration is None
        assert processor.progress.skipped == 2
        assert processor.progress.done == 4

    def test_rejects_zero_workers(self):
        """Test max_concurrent must be positive"""
        with pytest.raises(ValueError):
            BatchProcessor(max_concurrent=0)


class TestBatchProgress:
    """Test suite for BatchProgress"""

    def test_success_rate(self):
        """Test success rate and the remaining-time estimate"""
        progress = BatchProgress(total_jobs=4, completed=3, failed=1)
        assert progress.success_rate == pytest.approx(0.75)
        assert progress.estimated_time_remaining == pytest.approx(0.0)
        assert BatchProgress(total_jobs=2).estimated_time_remaining is None
        assert BatchProgress(total_jobs=2).success_rate == 0.0

    def test_remaining_time_counts_unfinished(self):
        """Test the estimate scales with jobs not yet done"""
        progress = BatchProgress(total_jobs=10, completed=2, started=0.0, finished=4.0)
        assert progress.estimated_time_remaining == pytest.approx(16.0)
