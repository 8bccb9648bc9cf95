"""
Batch Processor - Run scenario cells in parallel
Bounded worker pool; results come back in cell order whatever the thread count
"""
import asyncio
import time
from dataclasses import dataclass, field
from typing import Callable, Generic, List, Optional, Sequence, TypeVar

from loguru import logger

T = TypeVar("T")
R = TypeVar("R")

# Fraction of the batch between two progress lines
PROGRESS_STEP = 0.1


@dataclass
class BatchJob(Generic[T, R]):
    """One payload and what happened to it"""
    job_id: str
    index: int
    payload: T
    status: str = "pending"  # pending, running, completed, failed, skipped
    result: Optional[R] = None
    error: Optional[BaseException] = None
    started: Optional[float] = None
    finished: Optional[float] = None

    @property
    def duration(self) -> Optional[float]:
        if self.started is None or self.finished is None:
            return None
        return self.finished - self.started


@dataclass
class BatchProgress:
    """Counters for a running batch"""
    total_jobs: int
    completed: int = 0
    failed: int = 0
    skipped: int = 0
    running: int = 0
    started: float = field(default_factory=time.perf_counter)
    finished: Optional[float] = None

    @property
    def done(self) -> int:
        return self.completed + self.failed + self.skipped

    @property
    def success_rate(self) -> float:
        attempted = self.completed + self.failed
        return self.completed / attempted if attempted else 0.0

    @property
    def duration(self) -> float:
        return (self.finished or time.perf_counter()) - self.started

    @property
    def estimated_time_remaining(self) -> Optional[float]:
        """Seconds left at the current pace; None before the first job ends"""
        if self.completed == 0:
            return None
        return self.duration / self.completed * (self.total_jobs - self.done)


class BatchProcessor(Generic[T, R]):
    """
    Run a synchronous worker over many payloads with at most
    `max_concurrent` in flight

    Workers run in threads; numpy releases the GIL inside its kernels. With
    `fail_fast`, the first failure marks every job that has not started yet as
    skipped. Jobs already running are allowed to finish.
    """

    def __init__(self, max_concurrent: int = 1, fail_fast: bool = False):
        if max_concurrent < 1:
            raise ValueError(f"max_concurrent must be ≥ 1, got {max_concurrent}")
        self.max_concurrent = max_concurrent
        self.fail_fast = fail_fast
        self.progress: Optional[BatchProgress] = None
        self.jobs: List[BatchJob[T, R]] = []
        self._aborted = False
        self._next_report = 0

    async def process_batch(
        self,
        payloads: Sequence[T],
        worker: Callable[[T], R],
        batch_name: str = "batch",
    ) -> List[BatchJob[T, R]]:
        """
        Process every payload

        Args:
            payloads: Work items, in their canonical order
            worker: Called once per payload in a worker thread
            batch_name: Label for logs and job ids

        Returns:
            Jobs in payload order
        """
        self.jobs = [
            BatchJob(job_id=f"{batch_name}_{i + 1}", index=i, payload=payload)
            for i, payload in enumerate(payloads)
        ]
        self.progress = BatchProgress(total_jobs=len(self.jobs))
        self._aborted = False
        self._next_report = self._report_stride()
        logger.info(f"▶️  {batch_name}: {len(self.jobs)} cells, {self.max_concurrent} worker(s)")

        semaphore = asyncio.Semaphore(self.max_concurrent)

        async def bounded(job: BatchJob[T, R]) -> None:
            async with semaphore:
                await self._run_job(job, worker)

        await asyncio.gather(*(bounded(job) for job in self.jobs))

        self.progress.finished = time.perf_counter()
        self._log_summary(batch_name)
        return sorted(self.jobs, key=lambda j: j.index)

    async def _run_job(self, job: BatchJob[T, R], worker: Callable[[T], R]) -> None:
        if self._aborted:
            job.status = "skipped"
            self.progress.skipped += 1
            return

        job.status = "running"
        job.started = time.perf_counter()
        self.progress.running += 1
        try:
            job.result = await asyncio.to_thread(worker, job.payload)
            job.status = "completed"
            self.progress.completed += 1
        except Exception as e:
            job.status = "failed"
            job.error = e
            self.progress.failed += 1
            logger.error(f"❌ [{job.job_id}] {type(e).__name__}: {e}")
            if self.fail_fast:
                self._aborted = True
        finally:
            job.finished = time.perf_counter()
            self.progress.running -= 1
        self._maybe_report()

    def _report_stride(self) -> int:
        return max(1, int(round(PROGRESS_STEP * self.progress.total_jobs)))

    def _maybe_report(self) -> None:
        done = self.progress.done
        if done < self._next_report:
            return
        self._next_report = done + self._report_stride()
        eta = self.progress.estimated_time_remaining
        tail = f", ~{eta:.0f}s left" if eta is not None and done < self.progress.total_jobs else ""
        logger.info(f"   {done}/{self.progress.total_jobs} cells{tail}")

    @property
    def failed_jobs(self) -> List[BatchJob[T, R]]:
        return [job for job in self.jobs if job.status == "failed"]

    def _log_summary(self, batch_name: str) -> None:
        p = self.progress
        line = f"✅ {batch_name}: {p.completed}/{p.total_jobs} cells in {p.duration:.1f}s"
        if p.failed or p.skipped:
            line += f" ({p.failed} failed, {p.skipped} skipped)"
        logger.info(line)
