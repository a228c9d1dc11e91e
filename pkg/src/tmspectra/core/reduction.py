"""Deterministic reductions and the ordered worker pool.

Partition sums are reduced pairwise in a fixed tree order, so the result
does not depend on how the inputs were produced or on the worker count.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from typing import TypeVar

import numpy as np

logger = logging.getLogger("tmspectra.reduction")

T = TypeVar("T")
R = TypeVar("R")

# Relative widening applied to a reduced log-sum.
LOGSUM_SLACK = 1e-12


def tree_logsumexp(values: np.ndarray) -> float:
    """log(sum(exp(values))) by a pairwise tree; -inf entries contribute 0."""
    a = np.asarray(values, dtype=np.float64).ravel()
    if a.size == 0:
        return float("-inf")
    size = 1 << (a.size - 1).bit_length()
    if size != a.size:
        a = np.concatenate([a, np.full(size - a.size, -np.inf)])
    while a.size > 1:
        a = np.logaddexp(a[0::2], a[1::2])
    return float(a[0])


def tree_sum(values: np.ndarray) -> float:
    """Plain pairwise sum with the same fixed order."""
    a = np.asarray(values, dtype=np.float64).ravel()
    if a.size == 0:
        return 0.0
    size = 1 << (a.size - 1).bit_length()
    if size != a.size:
        a = np.concatenate([a, np.zeros(size - a.size)])
    while a.size > 1:
        a = a[0::2] + a[1::2]
    return float(a[0])


def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """Apply ``fn`` to every item, preserving input order.

    With more than one worker the calls run in a process pool; ``fn`` must
    then be a picklable module-level function.
    """
    seq: Sequence[T] = list(items)
    if workers <= 1 or len(seq) <= 1:
        return [fn(item) for item in seq]
    logger.debug("Mapping %d items over %d workers", len(seq), workers)
    with ProcessPoolExecutor(max_workers=min(workers, len(seq))) as pool:
        return list(pool.map(fn, seq))
