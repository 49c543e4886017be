"""Fault injection: deliberately broken planners must fail the symmetry check
by a wide margin (error far above the pass tolerance)."""

import numpy as np

from tc_atlas.harness import CheckConfig, HarnessCase, SphereSpace, TorusSpace, check_planner
from tc_atlas.sphere import SphereConfig, SpherePlanner
from tc_atlas.torus import TorusMidpointConfig, TorusMidpointPlanner


class ReversedArcSpherePlanner(SpherePlanner):
    """Always traverses the fixed inter-pole arc in the same direction instead
    of starting at the pole nearest A'."""

    def _fixed_arc(self, A0, P0, from_plus_pole):
        return super()._fixed_arc(A0, P0, from_plus_pole=True)


class UnreversedTorusMidpointPlanner(TorusMidpointPlanner):
    """Plays the base-to-A leg forward instead of reversed, so the swapped
    plan is no longer the time reverse."""

    def _first_half_arg(self, s):
        return s


def _case_for(planner, space, name, midpoint=None):
    return HarnessCase(
        name=name,
        space=space,
        plan=planner.plan,
        supports_diagonal=getattr(planner, "supports_diagonal", True),
        margin=planner.margin,
        midpoint=midpoint,
    )


def test_reversed_fixed_arc_breaks_sphere_symmetry():
    planner = ReversedArcSpherePlanner(SphereConfig(2))
    case = _case_for(planner, SphereSpace(2), "sphere-reversed-arc")
    rep = check_planner(case, CheckConfig(sample_pairs=4000, seed=42))
    assert not rep.properties["symmetry"]["pass"]
    assert rep.properties["symmetry"]["max_error"] > 1e-3


def test_reversed_fixed_arc_breaks_symmetry_on_directed_pair():
    planner = ReversedArcSpherePlanner(SphereConfig(2))
    good = SpherePlanner(SphereConfig(2))
    # a pair whose antipodalization lands near the negative pole, where the
    # mutated arc direction is wrong
    delta = (np.pi - 0.4) / 2.0
    a = np.pi + delta
    A = np.array([np.cos(a), np.sin(a), 0.0])
    b = a + 0.4
    B = np.array([np.cos(b), np.sin(b), 0.0])
    assert good.classify_region(A, B) == 2
    ts = np.linspace(0, 1, 101)
    pa = planner.plan(A, B).path.eval(ts)
    pb = planner.plan(B, A).path.eval(ts)
    assert np.max(np.linalg.norm(pb - pa[::-1], axis=1)) > 1e-1


def test_unreversed_first_leg_breaks_torus_midpoint_symmetry():
    planner = UnreversedTorusMidpointPlanner(TorusMidpointConfig(2))
    case = _case_for(
        planner, TorusSpace(2), "torus-midpoint-unreversed", midpoint=planner.midpoint_map()
    )
    rep = check_planner(case, CheckConfig(sample_pairs=2000, seed=42))
    assert not rep.properties["symmetry"]["pass"]
    assert rep.properties["symmetry"]["max_error"] > 1e-3


def test_unmutated_planners_pass_the_same_checks():
    planner = SpherePlanner(SphereConfig(2))
    case = _case_for(planner, SphereSpace(2), "sphere-ok")
    assert check_planner(case, CheckConfig(sample_pairs=1000, seed=42)).properties["symmetry"][
        "pass"
    ]
    tm = TorusMidpointPlanner(TorusMidpointConfig(2))
    case = _case_for(tm, TorusSpace(2), "tm-ok", midpoint=tm.midpoint_map())
    assert check_planner(case, CheckConfig(sample_pairs=1000, seed=42)).properties["symmetry"][
        "pass"
    ]
