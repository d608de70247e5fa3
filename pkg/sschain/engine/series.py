"""
Shared helpers for certified series evaluation
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Sequence, TypeVar

import numpy as np

from sschain.core.config import settings

EPS = float(np.finfo(float).eps)

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class CertifiedValue:
    """A real value with an absolute error bound"""

    value: float
    err_bound: float

    def __float__(self) -> float:
        return self.value


def ascending_sum(terms: np.ndarray, axis: int = -1) -> np.ndarray:
    """Sequential left-to-right sum along `axis`.

    Zero padding anywhere in a row leaves the result bit-identical, so rows
    summed over a shared padded window match rows summed alone.
    """
    terms = np.asarray(terms, dtype=float)
    if terms.shape[axis] == 0:
        return np.sum(terms, axis=axis)
    return np.take(np.cumsum(terms, axis=axis), -1, axis=axis)


def worker_count() -> int:
    if settings.THREADS is not None:
        return max(1, settings.THREADS)
    return min(8, os.cpu_count() or 1)


def ordered_map(fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
    """Map over items, in parallel when allowed; results keep input order"""
    workers = worker_count()
    if workers == 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
