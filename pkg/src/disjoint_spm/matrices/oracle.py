"""Exhaustive all-pairs oracles over Pi_n.

Every ordered pair ``(x, y)`` of the ``(n!)**(2n)`` matrices is visited once.
Rows of the pair matrix are processed in chunks; chunks may run on a thread
pool (numpy drops the GIL inside the ufunc loops) and their integer partial
counts are summed exactly, so the result does not depend on ``jobs``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

import numpy as np

from .core import check_enumerable, fingerprint_words, symbol_table

CHUNK = 64


@lru_cache(maxsize=None)
def _fingerprints(n: int) -> np.ndarray:
    return fingerprint_words(symbol_table(n), n)


def _map_chunks(fn, total: int, jobs: int):
    starts = range(0, total, CHUNK)
    if jobs <= 1:
        return [fn(s) for s in starts]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, starts))


def brute_force_disjoint_count(n: int, jobs: int = 1) -> int:
    """Ordered pairs of S-permutation matrices with no common 1."""
    check_enumerable(n)
    fp = _fingerprints(n)
    total = len(fp)

    def chunk(start: int) -> int:
        block = fp[start:start + CHUNK]
        clash = np.zeros((len(block), total), dtype=bool)
        for w in range(fp.shape[1]):
            clash |= (block[:, w, None] & fp[None, :, w]) != 0
        return int(clash.size - np.count_nonzero(clash))

    return sum(_map_chunks(chunk, total, jobs))


def agreement_histogram(n: int, jobs: int = 1) -> list[int]:
    """Entry m counts ordered pairs that coincide in exactly m blocks."""
    check_enumerable(n)
    fp = _fingerprints(n)
    total = len(fp)
    bins = n * n + 1

    def chunk(start: int) -> np.ndarray:
        block = fp[start:start + CHUNK]
        shared = np.zeros((len(block), total), dtype=np.int64)
        for w in range(fp.shape[1]):
            shared += np.bitwise_count(block[:, w, None] & fp[None, :, w])
        return np.bincount(shared.ravel(), minlength=bins).astype(object)

    hist = [0] * bins
    for part in _map_chunks(chunk, total, jobs):
        for m in range(bins):
            hist[m] += int(part[m])
    return hist


def q_oracle(hist: list[int], k: int) -> int:
    """Pairs weighted by the number of k-subsets of their coinciding blocks."""
    return sum(math.comb(m, k) * count for m, count in enumerate(hist))
