"""Order-preserving per-sample parallel map capped by ``SPANRANK_THREADS``."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

ENV_VAR = "SPANRANK_THREADS"


def thread_count(n_jobs: int | None = None) -> int:
    if n_jobs is None:
        raw = os.environ.get(ENV_VAR, "1")
        try:
            n_jobs = int(raw)
        except ValueError:
            raise ValueError(f"{ENV_VAR} must be an integer, got {raw!r}") from None
    return max(1, n_jobs)


def pmap(fn: Callable[[T], R], items: Iterable[T], n_jobs: int | None = None) -> list[R]:
    items = list(items)
    n = thread_count(n_jobs)
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
