"""Disjointification of partitions of unity, path-class lifting, and the
diagonal-neighborhood section."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tc_atlas.covers import (
    PartitionValues,
    UnorderedPathClass,
    diagonal_section,
    disjointify_index,
    lift_section,
    sphere_retraction,
    torus_retraction,
)
from tc_atlas.harness import symmetric_time_grid
from tc_atlas.planners import Path, angle_distance, convex_plan

GRID = symmetric_time_grid(101)


# ---------------------------------------------------------------- disjointify


def test_disjointify_first_value_wins():
    assert disjointify_index(PartitionValues(3, [0.5, 0.3, 0.2])) == 1


def test_disjointify_skips_small_values():
    assert disjointify_index(PartitionValues(3, [0.2, 0.2, 0.6])) == 3


def test_disjointify_tie_at_half_resolves_low():
    assert disjointify_index(PartitionValues(2, [0.5, 0.5])) == 1


def test_disjointify_exact_quarter_ties():
    assert disjointify_index(PartitionValues(4, [0.25, 0.25, 0.25, 0.25])) == 1
    assert disjointify_index(PartitionValues(4, [0.125, 0.25, 0.5, 0.125])) == 2


def test_disjointify_rejects_bad_partitions():
    with pytest.raises(ValueError):
        PartitionValues(3, [0.5, 0.3])
    with pytest.raises(ValueError):
        PartitionValues(2, [0.9, 0.2])
    with pytest.raises(ValueError):
        PartitionValues(2, [-0.1, 1.1])


def test_disjointify_flags_float_edge_below_threshold():
    # sums to 1 within tolerance yet no value reaches 1/k: the rule reports the
    # partition invariant as violated instead of inventing an index
    pv = PartitionValues(1, [0.9999999999999999])
    with pytest.raises(ValueError):
        disjointify_index(pv)


@settings(max_examples=300, deadline=None)
@given(
    data=st.data(),
    k=st.integers(min_value=1, max_value=8),
)
def test_disjointify_is_a_disjoint_cover(data, k):
    raw = np.array([data.draw(st.floats(0.0, 1.0)) for _ in range(k)])
    if raw.sum() == 0.0:
        raw = raw + 1.0
    values = raw / raw.sum()
    pv = PartitionValues(k, values)
    idx = disjointify_index(pv)
    # exactly one index, inside the support, and all earlier values small
    assert 1 <= idx <= k
    assert values[idx - 1] >= 1.0 / k  # support containment: value positive there
    assert all(v < 1.0 / k for v in values[: idx - 1])


def test_disjointify_swap_invariant_for_symmetric_values():
    # values computed from an unordered pair cannot distinguish (A, B) and (B, A)
    rng = np.random.default_rng(2)
    for _ in range(200):
        A, B = rng.uniform(size=2), rng.uniform(size=2)

        def values(x, y):
            raw = np.array([np.abs(x - y).sum(), 1.0, (x + y).sum()])
            return raw / raw.sum()

        assert disjointify_index(PartitionValues(3, values(A, B))) == disjointify_index(
            PartitionValues(3, values(B, A))
        )


# --------------------------------------------------------------- lift_section


def _segment_path(P, Q):
    return convex_plan(P, Q).path


def test_lift_keeps_matching_orientation():
    P, Q = np.array([0.0, 0.0]), np.array([1.0, 1.0])
    cls = UnorderedPathClass(_segment_path(P, Q))
    lifted = lift_section(cls, P)
    assert np.array_equal(lifted.eval(GRID), cls.representative.eval(GRID))


def test_lift_reverses_for_other_endpoint():
    P, Q = np.array([0.0, 0.0]), np.array([1.0, 1.0])
    cls = UnorderedPathClass(_segment_path(P, Q))
    at_q = lift_section(cls, Q)
    at_p = lift_section(cls, P)
    assert np.array_equal(at_q.eval(GRID), at_p.eval(1.0 - GRID))


def test_lift_equivariance_exact_on_random_classes():
    rng = np.random.default_rng(12)
    for _ in range(500):
        P = rng.normal(size=3)
        Q = rng.normal(size=3)
        if np.linalg.norm(P - Q) <= 1e-6:
            continue
        cls = UnorderedPathClass(_segment_path(P, Q))
        la = lift_section(cls, P).eval(GRID)
        lb = lift_section(cls, Q).eval(GRID)
        assert np.array_equal(lb, la[::-1])


def test_lift_rejects_strangers_and_degenerates():
    P, Q = np.array([0.0, 0.0]), np.array([1.0, 0.0])
    cls = UnorderedPathClass(_segment_path(P, Q))
    with pytest.raises(ValueError):
        lift_section(cls, np.array([5.0, 5.0]))
    with pytest.raises(ValueError):
        UnorderedPathClass(_segment_path(P, P + 1e-12))


# ----------------------------------------------------------- diagonal section


def test_diagonal_section_constant_on_diagonal():
    embed, retract, domain = sphere_retraction(2)
    A = np.array([0.0, 0.0, 1.0])
    path = diagonal_section(retract, embed, A, A, domain=domain)
    pts = path.eval(GRID)
    assert np.array_equal(pts, np.broadcast_to(A, pts.shape))


def test_diagonal_section_sphere_stays_on_sphere():
    embed, retract, domain = sphere_retraction(2)
    A = np.array([0.0, 0.0, 1.0])
    B = np.array([1.0, 0.0, 0.0])
    pts = diagonal_section(retract, embed, A, B, domain=domain).eval(GRID)
    assert np.max(np.abs(np.linalg.norm(pts, axis=1) - 1.0)) <= 1e-9
    assert np.allclose(pts[0], A) and np.allclose(pts[-1], B)


def test_diagonal_section_sphere_swap_is_exact_reversal():
    embed, retract, domain = sphere_retraction(2)
    rng = np.random.default_rng(3)
    for _ in range(300):
        A = rng.normal(size=3)
        A /= np.linalg.norm(A)
        B = rng.normal(size=3)
        B /= np.linalg.norm(B)
        if not domain(A, B):
            continue
        pa = diagonal_section(retract, embed, A, B, domain=domain).eval(GRID)
        pb = diagonal_section(retract, embed, B, A, domain=domain).eval(GRID)
        assert np.array_equal(pb, pa[::-1])


def test_diagonal_section_rejects_antipodal_chord():
    embed, retract, domain = sphere_retraction(2)
    A = np.array([0.0, 0.0, 1.0])
    with pytest.raises(ValueError):
        diagonal_section(retract, embed, A, -A, domain=domain)


def test_diagonal_section_torus_instance():
    embed, retract, domain = torus_retraction(2)
    A = np.array([0.2, 5.9])
    B = np.array([1.0, 0.3])
    path = diagonal_section(retract, embed, A, B, domain=domain)
    pts = path.eval(GRID)
    assert np.max(angle_distance(pts[0], A)) <= 1e-9
    assert np.max(angle_distance(pts[-1], B)) <= 1e-9
    pb = diagonal_section(retract, embed, B, A, domain=domain).eval(GRID)
    assert np.array_equal(pb, pts[::-1])
    with pytest.raises(ValueError):
        diagonal_section(retract, embed, A, A + np.array([np.pi, 0.0]), domain=domain)
