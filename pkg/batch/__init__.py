from batch.batch_processor import BatchJob, BatchProcessor, BatchProgress

__all__ = ["BatchJob", "BatchProcessor", "BatchProgress"]
