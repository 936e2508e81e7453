"""Linear-time selection and bounded-memory k-smallest streaming."""

from __future__ import annotations

from itertools import islice
from typing import Iterable, TypeVar

T = TypeVar("T")


def _median_of_medians(items: list) -> object:
    if len(items) <= 5:
        return sorted(items)[len(items) // 2]
    medians = [sorted(items[i:i + 5])[len(items[i:i + 5]) // 2]
               for i in range(0, len(items), 5)]
    return select(medians, len(medians) // 2)


def select(items: list, k: int):
    """Return the element of rank ``k`` (0-based) in worst-case linear time."""
    while True:
        if len(items) <= 10:
            return sorted(items)[k]
        pivot = _median_of_medians(items)
        lows = [x for x in items if x < pivot]
        if k < len(lows):
            items = lows
            continue
        n_eq = sum(1 for x in items if x == pivot)
        if k < len(lows) + n_eq:
            return pivot
        k -= len(lows) + n_eq
        items = [x for x in items if x > pivot]


def smallest(items: list, k: int) -> list:
    """The ``k`` smallest items (unordered), via one linear-time selection."""
    if k <= 0:
        return []
    if k >= len(items):
        return list(items)
    pivot = select(items, k - 1)
    out = [x for x in items if x < pivot]
    out.extend([pivot] * (k - len(out)))
    return out


def select_k_smallest_blockwise(stream: Iterable[T], k: int) -> list[T]:
    """Keep the k smallest items of a stream using O(k) working memory.

    The stream is consumed in blocks of ``k``; after each block the 2k
    candidates are cut back to k with a linear-time selection.  Items are
    compared as tuples, so ``(value, key)`` pairs break ties by key.  The
    result is sorted.  A stream shorter than ``k`` is returned whole.
    """
    if k <= 0:
        return []
    it = iter(stream)
    kept = list(islice(it, k))
    while True:
        block = list(islice(it, k))
        if not block:
            break
        kept.extend(block)
        kept = smallest(kept, k)
    kept.sort()
    return kept
