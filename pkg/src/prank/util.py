"""Small shared helpers: thread fan-out control."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

#: below this many items, fanning out costs more than it saves
FANOUT_MIN_ITEMS = 64


def worker_cap() -> int:
    """Thread cap from PRANK_THREADS; 0 or unset means automatic."""
    raw = os.environ.get("PRANK_THREADS", "0")
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap <= 0:
        return os.cpu_count() or 1
    return cap


def fanout_map(fn: Callable[[T], R], items: Sequence[T]) -> list[R]:
    """Map preserving order, threaded when the batch is large enough."""
    workers = min(worker_cap(), len(items))
    if workers <= 1 or len(items) < FANOUT_MIN_ITEMS:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))
