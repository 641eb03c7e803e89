"""Sparse rank over a prime field: pure-Python reference implementation.

Rows are processed one at a time against the pivot rows stored so far.
Each incoming row is scattered into a dense accumulator and reduced in
increasing column order, driven by a heap of touched columns, so one
elimination step costs time proportional to the support of the pivot row
used.  The result is a plain (non-reduced) echelon form: stored rows may
keep entries at later pivot columns, which does not affect the rank.

qhopf._mod_rank is the compiled twin with the same contract; qhopf.kernels
picks between them at import time.
"""

from __future__ import annotations

import heapq
from typing import Dict, Iterable

__all__ = ["rank_mod_p"]

_MAX_PRIME = 2**31  # products of two reduced values must fit in int64


def rank_mod_p(rows: Iterable[Dict[int, int]], ncols: int, p: int) -> int:
    """Rank over F_p of the matrix whose rows are ``{col: value}`` dicts.

    ``p`` must be a prime below 2**31 (so the compiled twin can use 64-bit
    products); values may be arbitrary ints and are reduced mod p.
    """
    if not 1 < p < _MAX_PRIME:
        raise ValueError(f"prime must satisfy 1 < p < 2**31, got {p}")
    acc = [0] * ncols
    pivots: dict = {}  # pivot column -> (cols list, vals list), pivot entry first, value 1
    rank = 0
    for row in rows:
        heap: list = []
        touched: list = []
        for c, v in row.items():
            if not 0 <= c < ncols:
                raise ValueError(f"column {c} out of range for ncols={ncols}")
            v %= p
            if v:
                acc[c] = v
                heapq.heappush(heap, c)
                touched.append(c)
        pivot_col = -1
        while heap:
            c = heapq.heappop(heap)
            f = acc[c]
            if f == 0:
                continue  # cancelled since it was pushed (or duplicate pop)
            entry = pivots.get(c)
            if entry is None:
                if pivot_col < 0:
                    pivot_col = c
                # else: tail entry with no pivot to clear it; stays in the row
                continue
            pcols, pvals = entry
            for cc, vv in zip(pcols, pvals):
                t = (acc[cc] - f * vv) % p
                if acc[cc] == 0 and t:
                    heapq.heappush(heap, cc)
                    touched.append(cc)
                acc[cc] = t
        if pivot_col >= 0:
            inv = pow(acc[pivot_col], -1, p)
            cols = [pivot_col]
            vals = [1]
            acc[pivot_col] = 0
            for c in touched:  # may hold duplicates; zeroing as we go skips them
                v = acc[c]
                if v:
                    cols.append(c)
                    vals.append(v * inv % p)
                    acc[c] = 0
            pivots[pivot_col] = (cols, vals)
            rank += 1
        else:
            for c in touched:
                acc[c] = 0
    return rank
