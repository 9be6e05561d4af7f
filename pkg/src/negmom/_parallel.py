"""Fixed-chunk thread pool helper.

Work is always cut into the same chunks regardless of the worker count, and
results are stitched back in chunk order, so output never depends on threads.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

CHUNK = 256
ENV_THREADS = "NEGMOM_THREADS"


def resolve_threads(requested: int | None = None) -> int:
    """NEGMOM_THREADS wins over ``requested``; falls back to the CPU count."""
    env = os.environ.get(ENV_THREADS)
    if env:
        try:
            value = int(env)
        except ValueError:
            value = 0
        if value >= 1:
            return value
    if requested is not None and requested >= 1:
        return int(requested)
    return max(1, os.cpu_count() or 1)


def run_chunked(work: Callable[[int, int], None], n: int, threads: int | None = None, chunk: int = CHUNK) -> None:
    """Call ``work(lo, hi)`` over [0, n) in fixed-size slices."""
    bounds = [(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]
    workers = min(resolve_threads(threads), max(1, len(bounds)))
    if workers == 1:
        for lo, hi in bounds:
            work(lo, hi)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for fut in [pool.submit(work, lo, hi) for lo, hi in bounds]:
            fut.result()
