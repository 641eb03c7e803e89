#!/usr/bin/env python3
"""Benchmark: compiled vs pure-Python sparse rank over a prime field.

Generates random sparse matrices at a few sizes, times both backends on
identical input, and checks that the ranks agree.  The compiled kernel is
imported directly (not through qhopf.kernels) so both implementations run
in one process regardless of QHOPF_FORCE_PY.

Usage: python3 benchmarks/bench_rank.py [--seed N]
"""

from __future__ import annotations

import argparse
import random
import time

from qhopf import _mod_rank_py

try:
    from qhopf import _mod_rank
except ImportError:
    _mod_rank = None

PRIME = 2147482951  # largest prime p = 30k + 1 below 2**31
CASES = [
    # (nrows, ncols, entries per row)
    (200, 300, 6),
    (600, 900, 6),
    (1200, 1800, 6),
    (2000, 6000, 8),
]


def make_rows(rng: random.Random, nrows: int, ncols: int, per_row: int):
    rows = []
    for _ in range(nrows):
        row = {}
        for _ in range(per_row):
            row[rng.randrange(ncols)] = rng.randrange(1, PRIME)
        rows.append(row)
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=20260818)
    args = ap.parse_args()

    if _mod_rank is None:
        print("compiled kernel not built; timing the pure-Python backend only")
    print(f"{'size':>18} {'nnz':>8} {'rank':>6} {'pure-py':>9} {'compiled':>9} {'speedup':>8}")
    for nrows, ncols, per_row in CASES:
        rng = random.Random(args.seed)
        rows = make_rows(rng, nrows, ncols, per_row)
        nnz = sum(len(r) for r in rows)

        t0 = time.perf_counter()
        r_py = _mod_rank_py.rank_mod_p(rows, ncols, PRIME)
        t_py = time.perf_counter() - t0

        if _mod_rank is not None:
            t0 = time.perf_counter()
            r_c = _mod_rank.rank_mod_p(rows, ncols, PRIME)
            t_c = time.perf_counter() - t0
            assert r_c == r_py, f"backend disagreement: {r_c} != {r_py}"
            print(f"{nrows:>8}x{ncols:<9} {nnz:>8} {r_py:>6} {t_py:>8.3f}s {t_c:>8.3f}s {t_py / t_c:>7.1f}x")
        else:
            print(f"{nrows:>8}x{ncols:<9} {nnz:>8} {r_py:>6} {t_py:>8.3f}s {'n/a':>9} {'n/a':>8}")


if __name__ == "__main__":
    main()
