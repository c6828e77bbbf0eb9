"""Small shared helpers: worker pool sizing and ordered parallel map."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

_T = TypeVar("_T")
_R = TypeVar("_R")

WORKERS_ENV = "ALTCHAIN_WORKERS"


def worker_count() -> int:
    """Worker pool size: ALTCHAIN_WORKERS, else available parallelism."""
    raw = os.environ.get(WORKERS_ENV, "")
    try:
        value = int(raw)
    except ValueError:
        value = os.cpu_count() or 1
    return max(1, value)


def ordered_map(fn: Callable[[_T], _R], items: Sequence[_T]) -> list[_R]:
    """Apply fn to items, results in input order.

    Items are independent, so they may be evaluated concurrently; the
    reduction is by input index either way, which keeps the output
    identical for every worker count.
    """
    workers = min(worker_count(), len(items)) if items else 1
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
