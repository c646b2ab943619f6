"""Worker-count policy shared by the vectorised evaluators."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = "BARRIER_DELAY_THREADS"


def max_workers() -> int:
    """Worker cap from ``BARRIER_DELAY_THREADS`` (default: CPU count)."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
        return max(1, n)
    return max(1, os.cpu_count() or 1)


def map_chunks(func, n_items: int, min_chunk: int = 256):
    """Apply ``func(slice)`` over contiguous chunks of ``range(n_items)``.

    Results come back in order.  numpy releases the GIL in the heavy kernels,
    so a thread pool is enough.
    """
    workers = min(max_workers(), max(1, n_items // min_chunk))
    if workers == 1:
        return [func(slice(0, n_items))]
    bounds = [round(i * n_items / workers) for i in range(workers + 1)]
    slices = [slice(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:])]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, slices))
