"""Thread-pool helper gated by the EXPMODEL_THREADS environment variable.

EXPMODEL_THREADS=0 or unset means automatic (number of CPUs, capped at 8);
EXPMODEL_THREADS=1 forces serial execution. Work is split into fixed-size
chunks whose boundaries do not depend on the thread count, so results are
byte-identical for any setting.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

CHUNK = 64


def thread_count() -> int:
    raw = os.environ.get("EXPMODEL_THREADS", "0").strip()
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 0:
        n = 0
    if n == 0:
        n = min(os.cpu_count() or 1, 8)
    return n


def chunk_ranges(total: int, chunk: int = CHUNK) -> list[tuple[int, int]]:
    return [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]


def run_chunks(fn: Callable[[int, int], None], total: int) -> None:
    """Call fn(lo, hi) for every chunk, possibly from worker threads."""
    ranges = chunk_ranges(total)
    workers = thread_count()
    if workers <= 1 or len(ranges) <= 1:
        for lo, hi in ranges:
            fn(lo, hi)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(lambda r: fn(*r), ranges))
