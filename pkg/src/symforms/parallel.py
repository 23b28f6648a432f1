"""Deterministic chunked execution, sequential or process-parallel.

Workers receive self-contained picklable tasks and results are folded
in task order, so the outcome never depends on the worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterator, Sequence

__all__ = ["chunk_ranges", "run_tasks", "DEFAULT_CHUNK"]

DEFAULT_CHUNK = 1 << 16


def chunk_ranges(total: int, chunk: int = DEFAULT_CHUNK) -> Iterator[tuple[int, int]]:
    lo = 0
    while lo < total:
        hi = min(lo + chunk, total)
        yield lo, hi
        lo = hi


def run_tasks(fn: Callable, tasks: Sequence, jobs: int = 1) -> list:
    """Map fn over tasks, preserving task order in the results."""
    tasks = list(tasks)
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as ex:
        return list(ex.map(fn, tasks))
