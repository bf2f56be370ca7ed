"""Deterministic worker-pool map.

Results are always returned in input order, so reports do not depend on
which worker finished first.  The default pool size comes from the
``SZEGO_LAB_THREADS`` environment variable (1 when unset).
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

from .errors import PreconditionError

THREADS_ENV = "SZEGO_LAB_THREADS"


def default_threads():
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        value = int(raw)
    except ValueError:
        raise PreconditionError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise PreconditionError(f"{THREADS_ENV} must be >= 1")
    return value


def parallel_map(func, items, threads=None):
    """``[func(x) for x in items]``, optionally spread over worker processes."""
    items = list(items)
    threads = default_threads() if threads is None else int(threads)
    if threads < 1:
        raise PreconditionError("threads must be >= 1")
    if threads == 1 or len(items) < 2:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(func, items))
