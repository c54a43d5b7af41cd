"""Deterministic chunked map over a thread pool.

Results are always returned in chunk order, and callers reduce them
with exact integer arithmetic, so the thread count never changes output.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

T = TypeVar("T")

ENV_THREADS = "PINDIST_THREADS"


def resolve_threads(threads: Optional[int] = None) -> int:
    if threads is None:
        raw = os.environ.get(ENV_THREADS)
        if raw is None or raw.strip() == "":
            return max(1, min(8, os.cpu_count() or 1))
        try:
            threads = int(raw)
        except ValueError:
            raise ValueError(f"{ENV_THREADS} must be a positive integer, got {raw!r}") from None
    if threads < 1:
        raise ValueError(f"thread count must be positive, got {threads}")
    return threads


def chunk_bounds(n: int, chunk: int) -> List[tuple]:
    chunk = max(1, chunk)
    return [(lo, min(n, lo + chunk)) for lo in range(0, n, chunk)]


def ordered_starmap(fn: Callable[..., T], items: Sequence[tuple],
                    threads: Optional[int] = None) -> List[T]:
    threads = resolve_threads(threads)
    if threads == 1 or len(items) <= 1:
        return [fn(*it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, *it) for it in items]
        return [f.result() for f in futures]


def ordered_map(fn: Callable[[object], T], items: Sequence, threads: Optional[int] = None) -> List[T]:
    return ordered_starmap(fn, [(it,) for it in items], threads)
