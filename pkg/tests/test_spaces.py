"""Catalog parsing, cohomology constructors and the bound assembly."""

import pytest

from tc_atlas.f2_algebra import cup_length, positive_part, verify_certificate, diagonal_kernel
from tc_atlas.spaces import (
    DEFAULT_SUITE,
    SpaceSpecError,
    bound_table,
    build_cohomology,
    compute_report,
    parse_space,
    report_row,
    reports_to_csv,
    reports_to_json,
    tc_bounds,
    tcs_bounds,
    tcs_sigma_bounds,
)


# ------------------------------------------------------------------- parsing


def test_parse_torus():
    s = parse_space("T^3")
    assert (s.dim, s.is_closed_manifold, s.is_aspherical) == (3, True, True)


def test_parse_surface():
    s = parse_space("Sigma_2")
    assert (s.dim, s.is_closed_manifold, s.is_aspherical) == (2, True, True)


def test_parse_product_not_aspherical():
    s = parse_space("S^2 x S^1")
    assert (s.dim, s.is_closed_manifold, s.is_aspherical) == (3, True, False)
    assert s.spec == "S^2 x S^1"
    assert s.published == {}


def test_parse_whitespace_insensitive_around_x():
    assert parse_space("S^2xS^1").spec == "S^2 x S^1"
    assert parse_space("S^2   x   S^1").spec == "S^2 x S^1"


def test_parse_point():
    s = parse_space("point")
    assert s.is_single_point and s.dim == 0


def test_genus_one_is_the_torus():
    assert parse_space("Sigma_1") == parse_space("T^2")


@pytest.mark.parametrize("bad", ["", "S^0", "T^-1", "Sigma_0", "RP^0", "Q^3", "S^2 x", "x S^1"])
def test_parse_rejects_malformed_specs(bad):
    with pytest.raises(SpaceSpecError):
        parse_space(bad)


# ---------------------------------------------------------------- cohomology


def test_sphere_cohomology_truncates():
    A = build_cohomology(parse_space("S^3"))
    assert A.n == 2
    a = A.element_from_labels(["a"])
    assert A.mul(a, a).is_zero()


def test_projective_cohomology_cup_length_three():
    A = build_cohomology(parse_space("RP^3"))
    assert cup_length(A, positive_part(A)).length == 3


def test_torus_cohomology_rank():
    assert build_cohomology(parse_space("T^2")).n == 4


def test_product_cohomology_dimension_multiplies():
    A = build_cohomology(parse_space("S^2 x T^2"))
    assert A.n == 2 * 4
    A.validate()


def test_point_cohomology():
    A = build_cohomology(parse_space("point"))
    assert A.n == 1 and A.top_degree == 0


# -------------------------------------------------------------------- bounds


def test_sphere_symmetric_bounds_pin_three():
    for n in (1, 2, 3, 4, 5):
        bp = tcs_bounds(parse_space(f"S^{n}"))
        assert (bp.lower, bp.upper) == (3, 3)


def test_point_bounds_are_all_one():
    s = parse_space("point")
    assert (tcs_bounds(s).lower, tcs_bounds(s).upper) == (1, 1)
    assert (tcs_sigma_bounds(s).lower, tcs_sigma_bounds(s).upper) == (1, 1)
    assert (tc_bounds(s).lower, tc_bounds(s).upper) == (1, 1)


def test_torus_constrained_bounds_close():
    for n in (1, 2, 3):
        bp = tcs_sigma_bounds(parse_space(f"T^{n}"))
        assert (bp.lower, bp.upper) == (2 * n + 1, 2 * n + 1)


def test_surface_constrained_bounds_close():
    for g in (1, 2, 3):
        bp = tcs_sigma_bounds(parse_space(f"Sigma_{g}"))
        assert (bp.lower, bp.upper) == (5, 5)


def test_sphere_eta_aspherical_gate():
    bp = tcs_sigma_bounds(parse_space("S^2"))
    assert (bp.lower, bp.upper) == (3, 5)


def test_torus_tc_lower_bound():
    for n in (1, 2, 3):
        assert tc_bounds(parse_space(f"T^{n}")).lower == n + 1


def test_odd_sphere_tc_bracket():
    bp = tc_bounds(parse_space("S^3"))
    assert (bp.lower, bp.upper) == (2, 2)
    assert bp.upper_method == "published"


def test_even_sphere_mod2_gap_documented():
    bp = tc_bounds(parse_space("S^2"))
    assert bp.lower == 2  # the mod-2 engine cannot see the integral bound
    assert bp.upper == 3 and bp.upper_method == "published"


def test_tc_upper_without_published_value_is_annotated():
    bp = tc_bounds(parse_space("RP^2"))
    assert bp.upper == 5
    assert bp.upper_method.startswith("catalog-annotation")


def test_lower_bound_certificates_verify():
    s = parse_space("T^3")
    r = compute_report(s)
    A = build_cohomology(s)
    T = A.tensor_square()
    assert verify_certificate(T, r.tc.lower_certificate, diagonal_kernel(T))
    assert r.tc.lower_certificate.length == 3


# --------------------------------------------------------------------- table


def test_default_suite_renders_15_consistent_rows():
    reports = bound_table(DEFAULT_SUITE)
    assert len(reports) == 15
    for r in reports:
        assert not r.flags
        for bp in (r.tc, r.tcs, r.tcs_sigma):
            assert bp.lower <= bp.upper
        assert r.tc.lower <= r.tcs.upper
        assert r.tcs.lower <= r.tcs_sigma.upper
        pub = r.space.published
        chain = [pub[k][0] for k in ("tc", "tcs", "tcs_sigma") if k in pub]
        assert all(a <= b for a, b in zip(chain, chain[1:]))


def test_published_values_inside_computed_brackets():
    for r in bound_table(DEFAULT_SUITE):
        pub = r.space.published
        for key, bp in (("tc", r.tc), ("tcs", r.tcs), ("tcs_sigma", r.tcs_sigma)):
            if key in pub:
                assert bp.lower <= pub[key][0] <= bp.upper


def test_norm_bound_within_dimension_bound():
    for r in bound_table(DEFAULT_SUITE):
        if r.space.is_closed_manifold and not r.space.is_single_point:
            assert r.ncl + 2 <= 2 * r.dim + 1


def test_genus_one_and_torus_rows_identical():
    r1 = compute_report(parse_space("Sigma_1"))
    r2 = compute_report(parse_space("T^2"))
    assert report_row(r1) == report_row(r2)
    assert r1.space.published == r2.space.published


def test_torus_row_values():
    r = compute_report(parse_space("T^3"))
    assert (r.tcs_sigma.lower, r.tcs_sigma.upper) == (7, 7)
    assert r.tc.lower == 4


def test_csv_and_json_numeric_content_agree():
    reports = bound_table(["S^2", "T^2", "RP^3"])
    csv_text = reports_to_csv(reports)
    import csv as csvmod
    import io
    import json

    rows = list(csvmod.reader(io.StringIO(csv_text)))
    doc = json.loads(reports_to_json(reports))
    assert len(doc["rows"]) == len(rows) - 1
    for row, jrow in zip(rows[1:], doc["rows"]):
        assert row[0] == jrow["space"]
        assert int(row[1]) == jrow["dim"]
        assert int(row[5]) == jrow["bounds"]["tc"]["lower"]
        assert int(row[6]) == jrow["bounds"]["tc"]["upper"]
        assert int(row[9]) == jrow["bounds"]["tcs_sigma"]["lower"]


def test_json_certificates_render():
    import json

    doc = json.loads(reports_to_json(bound_table(["T^2"]), certificates=True))
    cert = doc["rows"][0]["bounds"]["tc"]["lower_certificate"]
    assert cert["length"] == 2  # the bound is this cup length plus one
    assert len(cert["witnesses"]) == 2
    assert cert["product"] != "0"
