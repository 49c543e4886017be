"""Two-region time-reversal-symmetric planner on the unit sphere S^n.

The planner antipodalizes a pair (A, B) to the unique antipodal pair (A', -A')
spread equidistantly from A and B on a common great circle, then routes:

* region 1 (generic): geodesic A -> A', the half great circle A' -> -A'
  through the reference point, geodesic -A' -> B;
* region 2 (antipodalization near the reference poles): geodesic legs into the
  nearest pole, a fixed reference arc between the poles, and out to B.

All constructions are closed-form and swap a pair into an exact time reversal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .planners import Path, PlannerOutput, constant_path

# Pairs closer than this chord length count as equal (outside the planner domain);
# pairs with 1 + <A,B> below _ANTIPODAL_TOL take the exact-antipodal branch.
_EQUAL_CHORD_TOL = 1e-9
_ANTIPODAL_TOL = 1e-12


def sphere_point(coords, n=None) -> np.ndarray:
    """Validate and renormalize a point of S^n (unit vector of length n+1)."""
    v = np.asarray(coords, dtype=float).reshape(-1)
    if n is not None and v.shape[0] != n + 1:
        raise ValueError(f"expected {n + 1} coordinates, got {v.shape[0]}")
    if v.shape[0] < 2:
        raise ValueError("sphere points need at least 2 coordinates (n >= 1)")
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ValueError("zero vector is not a sphere point")
    return v / norm


def _norm(v) -> float:
    return math.sqrt(float(v @ v))


def sphere_distance(p, q) -> float:
    """Geodesic distance via the chord (stable near zero, unlike arccos of the
    inner product, whose rounding floor is ~1e-8)."""
    chord = 0.5 * _norm(np.asarray(p, float) - np.asarray(q, float))
    return 2.0 * math.asin(min(1.0, chord))


def _geodesic_segment(P, Q):
    """Vectorized unit-speed-in-parameter great-circle arc from P to Q (angle < pi).

    The angle and its sine come from the chord half-angle products, which are
    symmetric in (P, Q) bit for bit; swapping the endpoints therefore yields
    the exact time reversal instead of one polluted by a 1/sin(omega)
    rounding mismatch on short legs.
    """
    P = np.asarray(P, float)
    Q = np.asarray(Q, float)
    half_chord = 0.5 * _norm(Q - P)  # sin(omega/2)
    half_sum = 0.5 * _norm(Q + P)  # cos(omega/2)
    s = 2.0 * half_chord * half_sum  # sin(omega)
    if s < 1e-12:
        def fn(u):
            u = u[:, None]
            raw = (1.0 - u) * P + u * Q
            return raw / np.linalg.norm(raw, axis=1, keepdims=True)

        return fn
    omega = 2.0 * math.asin(min(1.0, half_chord))

    def fn(u):
        u = u[:, None]
        return (np.sin((1.0 - u) * omega) * P + np.sin(u * omega) * Q) / s

    return fn


@dataclass
class SphereConfig:
    """Geometry of the two-region cover: reference poles +-A0, a disk radius,
    the dispatch threshold (half the radius), and the witness P0 that pins the
    fixed arc between the poles."""

    n: int
    base_point: np.ndarray | None = None
    disk_radius: float = np.pi / 4
    boundary_threshold: float | None = None
    arc_witness: np.ndarray | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("sphere dimension must be >= 1")
        if not (0.0 < self.disk_radius < np.pi / 2):
            raise ValueError("disk_radius must lie in (0, pi/2)")
        if self.base_point is None:
            e0 = np.zeros(self.n + 1)
            e0[0] = 1.0
            self.base_point = e0
        else:
            self.base_point = sphere_point(self.base_point, self.n)
        if self.boundary_threshold is None:
            self.boundary_threshold = self.disk_radius / 2.0
        if not (0.0 < self.boundary_threshold <= self.disk_radius):
            raise ValueError("boundary_threshold must lie in (0, disk_radius]")
        if self.arc_witness is None:
            e1 = np.zeros(self.n + 1)
            e1[1] = 1.0
            self.arc_witness = e1
        else:
            w = sphere_point(self.arc_witness, self.n)
            w = w - np.dot(w, self.base_point) * self.base_point
            nw = np.linalg.norm(w)
            if nw < 1e-9:
                raise ValueError("arc witness must be independent of the base point")
            self.arc_witness = w / nw


class SpherePlanner:
    """plan(A, B) dispatches the diagonal rule (region 0) and the two sections."""

    region_count = 3
    supports_diagonal = True

    def __init__(self, config: SphereConfig | int):
        self.config = SphereConfig(config) if isinstance(config, int) else config

    # ------------------------------------------------------------ antipodalize

    def antipodalize(self, A, B):
        """The unique antipodal pair (A', -A') on a common great circle with
        d(A, A') = d(B, B') < d(A, B'); swap-equivariant: (B, A) -> (B', A')."""
        A = np.asarray(A, float)
        B = np.asarray(B, float)
        diff = B - A
        chord = _norm(diff)
        if chord <= _EQUAL_CHORD_TOL:
            raise ValueError("antipodalization is undefined on the diagonal (A = B)")
        c = min(1.0, max(-1.0, float(A @ B)))
        if 1.0 + c <= _ANTIPODAL_TOL:
            return A.copy(), B.copy()
        # half-angle forms from chords: cos(delta) = sin(theta/2), sin(delta) = cos(theta/2)
        cos_delta = 0.5 * chord
        sin_delta = 0.5 * _norm(A + B)
        w = B - c * A
        u = w / _norm(w)
        Ap = cos_delta * A - sin_delta * u
        Ap = Ap / _norm(Ap)
        return Ap, -Ap

    # ---------------------------------------------------------------- regions

    def classify_region(self, A, B) -> int:
        """2 iff the antipodalization lands within the dispatch threshold of a
        reference pole, else 1. Swap-invariant because the antipodalization is
        swap-equivariant up to sign and the criterion is symmetric in +-A0."""
        Ap, _ = self.antipodalize(A, B)
        return self._classify_pole(Ap)

    def _classify_pole(self, Ap) -> int:
        d_plus = sphere_distance(Ap, self.config.base_point)
        d_minus = np.pi - d_plus
        return 2 if min(d_plus, d_minus) < self.config.boundary_threshold else 1

    # --------------------------------------------------------------- sections

    def section_s1(self, A, B, _pair=None) -> Path:
        """Generic section: A -> A', half great circle through A0, -A' -> B."""
        A = np.asarray(A, float)
        B = np.asarray(B, float)
        Ap, Bp = _pair if _pair is not None else self.antipodalize(A, B)
        A0 = self.config.base_point
        d_plus = sphere_distance(Ap, A0)
        if min(d_plus, np.pi - d_plus) < 1e-9:
            raise ValueError("antipodalization degenerate at a reference pole; use section_s2")
        v = A0 - float(A0 @ Ap) * Ap
        v = v / _norm(v)

        def arc(s):
            s = s[:, None]
            return np.cos(np.pi * s) * Ap + np.sin(np.pi * s) * v

        segments = [
            (1.0 / 3.0, _geodesic_segment(A, Ap)),
            (1.0 / 3.0, arc),
            (1.0 / 3.0, _geodesic_segment(Bp, B)),
        ]
        return Path(segments, start=A, end=B)

    def section_s2(self, A, B, _pair=None) -> Path:
        """Near-pole section: constant-speed route through both poles along the
        fixed reference arc, traversed from the pole nearest A' to the pole
        nearest B'."""
        A = np.asarray(A, float)
        B = np.asarray(B, float)
        Ap, Bp = _pair if _pair is not None else self.antipodalize(A, B)
        A0 = self.config.base_point
        P0 = self.config.arc_witness
        d_plus = sphere_distance(Ap, A0)
        d_minus = np.pi - d_plus
        if abs(d_plus - d_minus) <= 1e-12:
            raise ValueError("antipodalization equidistant from both poles")
        near_plus = d_plus < d_minus
        pole_a = A0 if near_plus else -A0
        pole_b = -pole_a
        ell = min(d_plus, d_minus)

        fixed_arc = self._fixed_arc(A0, P0, from_plus_pole=near_plus)

        eta_segments = []
        if ell > 1e-15:
            eta_segments.append((ell, _geodesic_segment(Ap, pole_a)))
        eta_segments.append((np.pi, fixed_arc))
        if ell > 1e-15:
            eta_segments.append((ell, _geodesic_segment(pole_b, Bp)))
        total = 2.0 * ell + np.pi
        eta = Path([(d / total, f) for d, f in eta_segments], start=Ap, end=Bp)

        segments = [
            (1.0 / 3.0, _geodesic_segment(A, Ap)),
            (1.0 / 3.0, lambda s: eta.eval(s)),
            (1.0 / 3.0, _geodesic_segment(Bp, B)),
        ]
        return Path(segments, start=A, end=B)

    def _fixed_arc(self, A0, P0, from_plus_pole: bool):
        """The fixed arc between A0 and -A0 through P0; the same point set is
        traversed in whichever direction starts at the pole nearest A'."""

        def fn(s):
            ss = (s if from_plus_pole else 1.0 - s)[:, None]
            return np.cos(np.pi * ss) * A0 + np.sin(np.pi * ss) * P0

        return fn

    # ------------------------------------------------------------------- plan

    def plan(self, A, B) -> PlannerOutput:
        A = np.asarray(A, float)
        B = np.asarray(B, float)
        if _norm(B - A) <= _EQUAL_CHORD_TOL:
            return PlannerOutput(constant_path(A), 0)
        pair = self.antipodalize(A, B)
        region = self._classify_pole(pair[0])
        if region == 1:
            path = self.section_s1(A, B, _pair=pair)
        else:
            path = self.section_s2(A, B, _pair=pair)
        return PlannerOutput(path, region)

    # ------------------------------------------------------------- diagnostics

    def margin(self, A, B) -> float:
        """Distance to the nearest planner discontinuity locus: the diagonal,
        the antipodal locus, and the region-dispatch boundary."""
        A = np.asarray(A, float)
        B = np.asarray(B, float)
        theta = sphere_distance(A, B)
        if theta <= 1e-12:
            return 0.0
        Ap, _ = self.antipodalize(A, B)
        d_plus = sphere_distance(Ap, self.config.base_point)
        boundary = abs(min(d_plus, np.pi - d_plus) - self.config.boundary_threshold)
        return float(min(theta, np.pi - theta, boundary))
