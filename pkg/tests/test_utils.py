import asyncio
import threading
import time

import pytest
from knotselect.utils.async_helper import (
    gather_in_threads,
    gather_with_concurrency,
    run_jobs,
)


async def number_task(num: int) -> int:
    """
    just return the original number
    """
    return num


@pytest.mark.asyncio
async def test_gather_tasks_with_n_concurrency() -> None:
    tasks = [asyncio.create_task(number_task(i)) for i in range(1000)]
    sum_value = (0 + 999) * 1000 / 2
    result = await gather_with_concurrency(10, tasks)
    assert sum_value == sum(result), 'the final sum value is not correct'
    assert result == list(range(1000)), 'results must keep the task order'


@pytest.mark.asyncio
async def test_gather_in_threads_bounds_concurrency() -> None:
    lock = threading.Lock()
    running = [0]
    peak = [0]

    def job(num: int) -> int:
        with lock:
            running[0] += 1
            peak[0] = max(peak[0], running[0])
        time.sleep(0.01)
        with lock:
            running[0] -= 1
        return num * num

    result = await gather_in_threads(3, [lambda i=i: job(i) for i in range(12)])
    assert result == [i * i for i in range(12)], 'results must keep the job order'
    assert peak[0] <= 3, f'{peak[0]} jobs ran at once'


def test_run_jobs_single_worker_runs_in_order() -> None:
    order = []

    def job(num: int) -> int:
        order.append(num)
        return num

    assert run_jobs([lambda i=i: job(i) for i in range(5)], workers=1) == list(range(5))
    assert order == list(range(5))


def test_run_jobs_with_threads() -> None:
    assert run_jobs([lambda i=i: i + 1 for i in range(20)], workers=4) == list(range(1, 21))
