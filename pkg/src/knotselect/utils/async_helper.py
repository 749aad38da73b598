"""
async helpers
"""
from __future__ import annotations
import asyncio
from concurrent.futures import ThreadPoolExecutor
from typing import (
    Any,
    Awaitable,
    Callable,
    List,
    Optional,
    Sequence,
    TypeVar,
)

from knotselect.config import default_workers

T = TypeVar('T')


async def gather_with_concurrency(n_task: int, tasks: Sequence[Awaitable[T]]) -> List[T]:
    """
    gather tasks with the specific number concurrency
    Args:
        n_task: the number of tasks
        tasks: task objects
    """
    semaphore = asyncio.Semaphore(n_task)

    async def sem_task(task: Awaitable[T]) -> T:
        async with semaphore:
            return await task
    return list(await asyncio.gather(*(sem_task(task) for task in tasks)))


async def gather_in_threads(n_task: int, jobs: Sequence[Callable[[], T]]) -> List[T]:
    """
    run blocking jobs in a thread pool, at most `n_task` at a time, and keep
    their order in the result
    """
    loop = asyncio.get_running_loop()
    with ThreadPoolExecutor(max_workers=n_task) as executor:
        futures: List[Awaitable[T]] = [loop.run_in_executor(executor, job) for job in jobs]
        return await gather_with_concurrency(n_task, futures)


def run_jobs(jobs: Sequence[Callable[[], T]], workers: Optional[int] = None) -> List[T]:
    """
    synchronous entry of `gather_in_threads`; one worker runs the jobs in
    order on the calling thread
    """
    n_task = default_workers() if workers is None else workers
    if n_task <= 1 or len(jobs) <= 1:
        return [job() for job in jobs]
    result: Any = asyncio.run(gather_in_threads(n_task, jobs))
    return result
