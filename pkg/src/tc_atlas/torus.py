"""Planners on the n-torus (angle coordinates).

Two planners: the coordinatewise product of the circle instance of the sphere
planner (time-reversal symmetric, no midpoint constraint), and the
constant-midpoint planner that routes every motion through a base state at
t = 1/2 by concatenating the reversed base-to-A path with the base-to-B path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .planners import Path, PlannerOutput, TWO_PI, angle_distance, wrap_angle
from .sphere import SphereConfig, SpherePlanner


def torus_point(angles, n=None) -> np.ndarray:
    v = wrap_angle(np.asarray(angles, dtype=float).reshape(-1))
    if n is not None and v.shape[0] != n:
        raise ValueError(f"expected {n} angles, got {v.shape[0]}")
    if v.shape[0] < 1:
        raise ValueError("torus points need at least one angle")
    return v


def torus_distance(a, b) -> float:
    """max over coordinates of the wrap-aware angle distance."""
    return float(np.max(angle_distance(a, b)))


@dataclass
class TorusMidpointConfig:
    """Base state for the constant midpoint and the width of the band around
    each coordinate's antipode inside which the alternate (counterclockwise)
    arc is used instead of the shortest one."""

    n: int
    base: np.ndarray | None = None
    antipode_margin: float = np.pi / 8

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("torus dimension must be >= 1")
        if not (0.0 < self.antipode_margin < np.pi / 2):
            raise ValueError("antipode_margin must lie in (0, pi/2)")
        if self.base is None:
            self.base = np.zeros(self.n)
        else:
            self.base = torus_point(self.base, self.n)


class TorusMidpointPlanner:
    """Section over pairs of distinct states whose motions all pass through the
    base state at time 1/2; deliberately undefined on the diagonal."""

    supports_diagonal = False

    def __init__(self, config: TorusMidpointConfig | int):
        self.config = TorusMidpointConfig(config) if isinstance(config, int) else config
        self.region_count = 4 ** self.config.n

    def _arc_rules(self, x) -> np.ndarray:
        """True where the coordinate sits inside the antipode band (use the
        fixed counterclockwise arc); False selects the shortest arc."""
        antipode = wrap_angle(self.config.base + np.pi)
        return angle_distance(x, antipode) < self.config.antipode_margin

    def _deltas(self, x) -> tuple[np.ndarray, np.ndarray]:
        """Signed coordinate increments of the base-to-x path and the rules used."""
        base = self.config.base
        rules = self._arc_rules(x)
        raw = wrap_angle(np.asarray(x, float) - base)
        shortest = np.where(raw > np.pi, raw - TWO_PI, raw)
        ccw = raw  # counterclockwise arc: increase the angle by the full wrap
        return np.where(rules, ccw, shortest), rules

    def plan(self, A, B) -> PlannerOutput:
        A = torus_point(A, self.config.n)
        B = torus_point(B, self.config.n)
        if torus_distance(A, B) <= 1e-12:
            raise ValueError("constant-midpoint planner is undefined on the diagonal (A = B)")
        base = self.config.base
        dA, rulesA = self._deltas(A)
        dB, rulesB = self._deltas(B)

        def first_half(s):  # plays base->A reversed: starts at A, ends at base
            return wrap_angle(base + self._first_half_arg(s)[:, None] * dA)

        def second_half(s):
            return wrap_angle(base + s[:, None] * dB)

        path = Path([(0.5, first_half), (0.5, second_half)], start=A, end=B)
        digits = rulesA.astype(int) + 2 * rulesB.astype(int)
        region = int(np.sum(digits * 4 ** np.arange(self.config.n)))
        return PlannerOutput(path, region)

    def _first_half_arg(self, s: np.ndarray) -> np.ndarray:
        # the reversal that puts the base state at t = 1/2; overridable for
        # fault-injection tests
        return 1.0 - s

    def midpoint_map(self):
        from .planners import midpoint_constant

        return midpoint_constant(self.config.base)

    def margin(self, A, B) -> float:
        """Distance to the planner's rule boundaries: the diagonal and each
        coordinate's antipode-band edges (for both endpoints)."""
        A = torus_point(A, self.config.n)
        B = torus_point(B, self.config.n)
        antipode = wrap_angle(self.config.base + np.pi)
        eps = self.config.antipode_margin
        edges = [
            float(np.min(np.abs(angle_distance(x, antipode) - eps))) for x in (A, B)
        ]
        return min(torus_distance(A, B), *edges)


class TorusSymmetricPlanner:
    """Coordinatewise product of the circle symmetric planner; the region code
    is the base-3 encoding of the per-coordinate regions."""

    supports_diagonal = True

    def __init__(self, n: int, circle_config: SphereConfig | None = None):
        if n < 1:
            raise ValueError("torus dimension must be >= 1")
        self.n = n
        self.circle = SpherePlanner(circle_config or SphereConfig(1))
        self.region_count = 3 ** n

    @staticmethod
    def _embed(theta: float) -> np.ndarray:
        return np.array([np.cos(theta), np.sin(theta)])

    def plan(self, A, B) -> PlannerOutput:
        A = torus_point(A, self.n)
        B = torus_point(B, self.n)
        outs = [
            self.circle.plan(self._embed(a), self._embed(b)) for a, b in zip(A, B)
        ]

        def fn(s):
            cols = []
            for o in outs:
                pts = o.path.eval(s)
                cols.append(np.arctan2(pts[:, 1], pts[:, 0]))
            return wrap_angle(np.stack(cols, axis=1))

        path = Path([(1.0, fn)], start=A, end=B)
        regions = np.array([o.region for o in outs])
        region = int(np.sum(regions * 3 ** np.arange(self.n)))
        return PlannerOutput(path, region)

    def margin(self, A, B) -> float:
        A = torus_point(A, self.n)
        B = torus_point(B, self.n)
        return min(
            self.circle.margin(self._embed(a), self._embed(b)) for a, b in zip(A, B)
        )


def empirical_region_count(planner, samples: int, seed: int = 0) -> int:
    """Number of distinct region codes hit by uniformly sampled distinct pairs.

    Any correct planner with a constant midpoint on T^n must use at least
    2n + 1 regions, so the observed count is a lower-bound witness to compare
    against that floor.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    n = getattr(planner, "n", None) or planner.config.n
    rng = np.random.Generator(np.random.Philox(seed))
    seen = set()
    for _ in range(samples):
        A = rng.uniform(0.0, TWO_PI, n)
        B = rng.uniform(0.0, TWO_PI, n)
        if torus_distance(A, B) <= 1e-12:
            continue
        seen.add(planner.plan(A, B).region)
    return len(seen)
