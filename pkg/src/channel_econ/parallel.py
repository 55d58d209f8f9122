"""Deterministic task-level parallelism.

Worker count comes from CHANNEL_ECON_THREADS (default 1, serial).  Results
are returned in task order and every task draws its randomness from a stream
derived from (master seed, task index), so output never depends on the
worker count or scheduling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

ENV_VAR = "CHANNEL_ECON_THREADS"


def worker_count() -> int:
    raw = os.environ.get(ENV_VAR, "")
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def parallel_map(fn: Callable[[T], R], items: Sequence[T]) -> list[R]:
    workers = worker_count()
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
