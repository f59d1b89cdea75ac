"""Order-preserving map over a thread pool."""

from __future__ import annotations

import os
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

A = TypeVar("A")
B = TypeVar("B")


def default_workers() -> int:
    return os.cpu_count() or 1


def pmap(fn: Callable[[A], B], items: Iterable[A], workers: int | None = 1) -> list[B]:
    """``list(map(fn, items))``, computed on ``workers`` threads.

    Results come back in input order, so callers merge deterministically
    regardless of the worker count.
    """
    items = list(items)
    if workers is None:
        workers = default_workers()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))
