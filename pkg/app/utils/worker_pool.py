"""
Worker Pool

Ordered chunked execution of compute kernels on a thread pool. numpy
releases the GIL inside its array kernels, so cells (relaxation) and node
columns (transport) can be processed concurrently. Results are always
assembled in chunk order, which keeps every run bit-reproducible regardless
of the worker count.
"""

import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, TypeVar

from app.core.logging import get_logger

logger = get_logger(__name__)

T = TypeVar("T")


def chunk_bounds(total: int, chunks: int) -> List[slice]:
    """Split range(total) into at most ``chunks`` contiguous slices."""
    chunks = max(1, min(int(chunks), int(total))) if total else 1
    base, extra = divmod(int(total), chunks)
    bounds = []
    start = 0
    for index in range(chunks):
        stop = start + base + (1 if index < extra else 0)
        bounds.append(slice(start, stop))
        start = stop
    return bounds


class WorkerPool:
    """
    Thread pool running one function over contiguous chunks of an index range.

    Attributes:
        max_workers: Worker cap (1 runs everything in the calling thread)
        max_chunk: Upper bound on chunk length, limits temporary memory
    """

    def __init__(self, max_workers: int = 1, max_chunk: Optional[int] = None):
        """
        Initialize the pool.

        Args:
            max_workers: Maximum number of concurrent workers
            max_chunk: Optional cap on the items per chunk
        """
        self.max_workers = max(1, int(max_workers))
        self.max_chunk = max_chunk
        self._executor: Optional[ThreadPoolExecutor] = None
        self.lock = threading.Lock()
        logger.debug(f"WorkerPool initialized with {self.max_workers} workers")

    def _get_executor(self) -> ThreadPoolExecutor:
        with self.lock:
            if self._executor is None:
                self._executor = ThreadPoolExecutor(max_workers=self.max_workers, thread_name_prefix="AwbgkWorker")
            return self._executor

    def map_chunks(self, func: Callable[[slice], T], total: int, max_chunk: Optional[int] = None) -> List[T]:
        """
        Apply ``func`` to contiguous slices covering range(total).

        Args:
            func: Callable receiving a slice
            total: Length of the index range
            max_chunk: Per-call cap on the chunk length (default: the pool's)

        Returns:
            Results in slice order
        """
        cap = max_chunk or self.max_chunk
        # A fixed cap makes the chunk layout independent of the worker count
        chunks = -(-int(total) // int(cap)) if cap else self.max_workers
        bounds = chunk_bounds(total, chunks)

        if self.max_workers == 1 or len(bounds) == 1:
            return [func(bound) for bound in bounds]

        futures = [self._get_executor().submit(func, bound) for bound in bounds]
        return [future.result() for future in futures]

    def shutdown(self, wait: bool = True) -> None:
        """
        Shutdown the executor.

        Args:
            wait: If True, wait for running chunks to finish
        """
        with self.lock:
            if self._executor is not None:
                self._executor.shutdown(wait=wait)
                self._executor = None

    def __enter__(self) -> "WorkerPool":
        return self

    def __exit__(self, *exc) -> None:
        self.shutdown()
