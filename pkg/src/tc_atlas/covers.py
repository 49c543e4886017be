"""Generic cover machinery: partition-of-unity disjointification, lifting
unordered path classes to oriented sections, and the diagonal-neighborhood
section through an embedding retraction.

The disjointification rule is the printed one: the first index whose value
reaches 1/k wins, so ties resolve to the smaller index with no epsilon
fudging, and the induced regions are pairwise disjoint and cover the base.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .planners import Path, angle_distance, wrap_angle


@dataclass
class PartitionValues:
    """Values of k partition-of-unity functions at one point."""

    k: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).reshape(-1)
        if self.k < 1 or self.values.shape[0] != self.k:
            raise ValueError("need exactly k values with k >= 1")
        if np.any(self.values < 0.0):
            raise ValueError("partition values must be nonnegative")
        if abs(float(self.values.sum()) - 1.0) > 1e-9:
            raise ValueError(f"partition values sum to {self.values.sum()}, expected 1")


def disjointify_index(pv: PartitionValues) -> int:
    """Smallest 1-based i with values[i] >= 1/k.

    Well-defined because the values sum to 1, so some value reaches 1/k; on
    the floating-point edge where none does (sum barely under 1 with all
    values just below the threshold) the partition invariant is reported as
    violated.
    """
    thr = 1.0 / pv.k
    hits = np.flatnonzero(pv.values >= thr)
    if hits.size == 0:
        raise ValueError("invariant violation (sum != 1): no value reaches 1/k")
    return int(hits[0]) + 1


def _euclidean(p, q) -> float:
    return float(np.linalg.norm(np.asarray(p, float) - np.asarray(q, float)))


class UnorderedPathClass:
    """A path up to time reversal, stored via one representative with distinct
    endpoints."""

    def __init__(self, representative: Path, distance=None):
        self.representative = representative
        self.distance = distance or _euclidean
        self._p0 = np.atleast_1d(representative.eval(0.0))
        self._p1 = np.atleast_1d(representative.eval(1.0))
        if self.distance(self._p0, self._p1) <= 1e-9:
            raise ValueError("representative endpoints must be distinct")

    @property
    def endpoints(self):
        return self._p0.copy(), self._p1.copy()


def lift_section(cls: UnorderedPathClass, A) -> Path:
    """Orient the representative to start at A (reversing when needed), so
    lifting at the two endpoints yields exact time reverses of each other."""
    d0 = cls.distance(cls._p0, A)
    d1 = cls.distance(cls._p1, A)
    if d0 <= 1e-9 and d1 <= 1e-9:
        raise ValueError("both endpoints match A: degenerate path class")
    if d0 <= 1e-9:
        return cls.representative
    if d1 <= 1e-9:
        return cls.representative.reverse()
    raise ValueError("A matches neither endpoint of the representative")


def diagonal_section(retraction, embedding, A, B, domain=None) -> Path:
    """Section near the diagonal: t -> r((1-t) e(A) + t e(B)).

    Equal arguments give the constant path; otherwise the chord is evaluated
    in the symmetric (1-s, s) form, so swapping A and B is an exact time
    reversal. The caller-supplied domain predicate guards that the chord stays
    inside the retraction's domain.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if domain is not None and not domain(A, B):
        raise ValueError("chord between the embedded endpoints leaves the retraction domain")
    if np.array_equal(A, B):
        pt = np.atleast_1d(retraction(np.atleast_2d(embedding(A)))[0])

        def const(s):
            return np.broadcast_to(pt, (len(s), pt.shape[0])).copy()

        return Path([(1.0, const)], start=pt, end=pt)
    eA = np.asarray(embedding(A), dtype=float)
    eB = np.asarray(embedding(B), dtype=float)

    def fn(s):
        s = s[:, None]
        return retraction((1.0 - s) * eA + s * eB)

    return Path([(1.0, fn)], start=A, end=B)


# --------------------------------------------------------- concrete instances


def sphere_retraction(n: int):
    """(embedding, retraction, domain) for S^n in R^{n+1}: radial normalization;
    the chord must avoid the origin, i.e. the pair must be non-antipodal."""

    def embed(p):
        return np.asarray(p, dtype=float)

    def retract(x):
        x = np.atleast_2d(x)
        return x / np.linalg.norm(x, axis=1, keepdims=True)

    def domain(A, B):
        return float(np.dot(A, B)) > -1.0 + 1e-6

    return embed, retract, domain


def torus_retraction(n: int):
    """(embedding, retraction, domain) for T^n: per-coordinate (cos, sin)
    embedding into R^{2n} and per-coordinate angle of the chord point; every
    coordinate pair must be non-antipodal."""

    def embed(p):
        p = np.asarray(p, dtype=float)
        out = np.empty(2 * p.shape[0])
        out[0::2] = np.cos(p)
        out[1::2] = np.sin(p)
        return out

    def retract(x):
        x = np.atleast_2d(x)
        return wrap_angle(np.arctan2(x[:, 1::2], x[:, 0::2]))

    def domain(A, B):
        return float(np.max(angle_distance(A, B))) < np.pi - 1e-6

    return embed, retract, domain
