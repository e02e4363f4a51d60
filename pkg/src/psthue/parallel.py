"""Ordered process-pool map.  Results come back in input order, so exact
partial sums merged from them do not depend on the worker count."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np


def ordered_map(func, items, workers: int = 1) -> list:
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(func, items))


def chunk_ranges(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    """Split [lo, hi] into at most ``parts`` contiguous inclusive ranges."""
    if hi < lo:
        return []
    edges = np.linspace(lo, hi + 1, max(1, parts) + 1).astype(np.int64)
    return [(int(a), int(b) - 1) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def spawn_seeds(seed: int, n: int) -> list[int]:
    """n independent 64-bit seeds derived from one root seed."""
    return [int(s.generate_state(1, dtype=np.uint64)[0]) for s in np.random.SeedSequence(seed).spawn(n)]
