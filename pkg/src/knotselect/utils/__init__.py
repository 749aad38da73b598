"""doc"""
from .async_helper import (
    gather_in_threads,
    gather_with_concurrency,
    run_jobs,
)

__all__ = [
    'gather_in_threads',
    'gather_with_concurrency',
    'run_jobs',
]
