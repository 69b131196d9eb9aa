"""Order-preserving process pool used by every scan driver.

Work items are independent and pure; results come back in submission order,
so merged output does not depend on the worker count.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Sequence


def _star(args):
    fn, params = args
    return fn(*params)


def ordered_map(fn: Callable, items: Iterable[Sequence], jobs: int = 1) -> list:
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(*params) for params in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_star, [(fn, params) for params in items], chunksize=1))
