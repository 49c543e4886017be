"""Independent brute-force oracles used to cross-check the engine.

The cup-length oracle enumerates actual products of spanning elements level by
level (deduplicating by value), multiplying with its own table-walk routine;
it shares only the multiplication *data* with the engine, never the ladder.
"""

from __future__ import annotations

import numpy as np


def naive_mul(algebra, xs: frozenset, ys: frozenset) -> frozenset:
    """Product of two elements given as index sets, straight off the table."""
    out = set()
    for i in xs:
        for j in ys:
            for k in algebra.product_indices(i, j):
                if k in out:
                    out.remove(k)
                else:
                    out.add(k)
    return frozenset(out)


def _positive_components(algebra, rows) -> list[frozenset]:
    degs = algebra.degrees
    gens = set()
    for row in np.asarray(rows, dtype=np.uint8):
        nz = np.flatnonzero(row)
        for d in sorted({int(degs[i]) for i in nz}):
            if d <= 0:
                continue
            comp = frozenset(int(i) for i in nz if degs[i] == d)
            if comp:
                gens.add(comp)
    return sorted(gens, key=lambda f: sorted(f))


def brute_force_cup_length(algebra, rows) -> int:
    """Max k such that some product of k positive-degree (homogeneous
    components of) spanning elements is nonzero, by exhaustive enumeration."""
    gens = _positive_components(algebra, rows)
    level = set(gens)
    k = 0
    while level:
        k += 1
        nxt = set()
        for v in level:
            for g in gens:
                p = naive_mul(algebra, v, g)
                if p:
                    nxt.add(p)
        level = nxt
        if k > algebra.top_degree:  # safety: degree grows by >= 1 per factor
            raise RuntimeError("oracle failed to terminate")
    return k
