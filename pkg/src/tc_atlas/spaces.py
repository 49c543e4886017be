"""Catalog of built-in spaces: mod-2 cohomology constructors, published exact
values from the motion-planning literature, and the bound assembly that turns
cup-lengths into certified lower/upper brackets for TC, TC^S and TC^S_sigma.

Computed bounds and published values are kept in separate columns on purpose:
the mod-2 engine cannot see integral phenomena (e.g. the even-sphere TC), and
the reports make that visible instead of silently merging numbers.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field

from .f2_algebra import (
    CupLengthCertificate,
    F2Subspace,
    GradedF2Algebra,
    cup_length,
    diagonal_kernel,
    norm_subspace,
    positive_part,
    tensor_product,
)


class SpaceSpecError(ValueError):
    """Malformed space specification (a usage error, not a domain error)."""


@dataclass(frozen=True)
class Atom:
    family: str  # "S" | "T" | "Sigma" | "RP" | "point"
    param: int

    def render(self) -> str:
        if self.family == "point":
            return "point"
        if self.family == "Sigma":
            return f"Sigma_{self.param}"
        return f"{self.family}^{self.param}"

    @property
    def dim(self) -> int:
        return {"S": self.param, "T": self.param, "Sigma": 2, "RP": self.param, "point": 0}[
            self.family
        ]

    @property
    def is_aspherical(self) -> bool:
        if self.family in ("T", "Sigma", "point"):
            return True
        if self.family in ("S", "RP"):
            return self.param == 1
        raise AssertionError(self.family)


@dataclass(frozen=True)
class SpaceDescriptor:
    atoms: tuple[Atom, ...]
    spec: str
    dim: int
    is_closed_manifold: bool
    is_aspherical: bool
    is_single_point: bool
    published: dict = field(default_factory=dict, compare=False)


_ATOM_RES = [
    (re.compile(r"^S\^(\d+)$"), "S"),
    (re.compile(r"^T\^(\d+)$"), "T"),
    (re.compile(r"^Sigma_(\d+)$"), "Sigma"),
    (re.compile(r"^RP\^(\d+)$"), "RP"),
]


def _parse_atom(token: str) -> Atom:
    token = token.strip()
    if token == "point":
        return Atom("point", 0)
    for rx, fam in _ATOM_RES:
        m = rx.match(token)
        if m:
            p = int(m.group(1))
            if p < 1:
                raise SpaceSpecError(f"parameter must be >= 1 in {token!r}")
            if fam == "Sigma" and p == 1:
                return Atom("T", 2)  # genus-1 surface is the 2-torus
            return Atom(fam, p)
    raise SpaceSpecError(f"unrecognized space {token!r}")


def _published_for(atom: Atom) -> dict:
    fam, p = atom.family, atom.param
    if fam == "S":
        return {
            "tc": (2 if p % 2 == 1 else 3, "literature:spheres"),
            "tcs": (3, "literature:spheres"),
        }
    if fam == "T":
        return {
            "tc": (p + 1, "literature:tori"),
            "tcs_sigma": (2 * p + 1, "literature:tori"),
        }
    if fam == "Sigma":  # p >= 2 here; genus 1 parses as T^2
        return {
            "tc": (5, "literature:surfaces"),
            "tcs_sigma": (5, "literature:surfaces"),
        }
    if fam == "point":
        return {"tc": (1, "literature:single-point"), "tcs": (1, "literature:single-point")}
    return {}


def parse_space(spec: str) -> SpaceDescriptor:
    """Parse "S^n" | "T^n" | "Sigma_g" | "RP^n" | "point" and products "A x B"."""
    if not isinstance(spec, str) or not spec.strip():
        raise SpaceSpecError("empty space specification")
    tokens = [t for t in re.split(r"x", spec)]
    if any(not t.strip() for t in tokens):
        raise SpaceSpecError(f"malformed product in {spec!r}")
    atoms = tuple(_parse_atom(t) for t in tokens)
    dim = sum(a.dim for a in atoms)
    aspherical = all(a.is_aspherical for a in atoms)
    single = all(a.family == "point" for a in atoms)
    published = _published_for(atoms[0]) if len(atoms) == 1 else {}
    canonical = " x ".join(a.render() for a in atoms)
    return SpaceDescriptor(
        atoms=atoms,
        spec=canonical,
        dim=dim,
        is_closed_manifold=True,  # every catalog family is a closed manifold
        is_aspherical=aspherical,
        is_single_point=single,
        published=published,
    )


# ------------------------------------------------------------- cohomology


def _point_algebra() -> GradedF2Algebra:
    return GradedF2Algebra(0, [("1", 0)], {(0, 0): (0,)}, unit_index=0)


def _sphere_algebra(n: int) -> GradedF2Algebra:
    basis = [("1", 0), ("a", n)]
    mult = {(0, 0): (0,), (0, 1): (1,), (1, 0): (1,)}  # a*a truncates
    return GradedF2Algebra(n, basis, mult, unit_index=0)


def _rp_algebra(n: int) -> GradedF2Algebra:
    basis = [("1", 0)] + [(f"a^{k}" if k > 1 else "a", k) for k in range(1, n + 1)]
    mult = {}
    for i in range(n + 1):
        for j in range(n + 1):
            if i + j <= n:
                mult[(i, j)] = (i + j,)
    return GradedF2Algebra(n, basis, mult, unit_index=0)


def _torus_algebra(n: int) -> GradedF2Algebra:
    # exterior algebra on n degree-1 generators; basis = subsets, mod-2 signs vanish
    subsets = sorted(range(1 << n), key=lambda s: (bin(s).count("1"), s))
    pos = {s: i for i, s in enumerate(subsets)}

    def label(s):
        if s == 0:
            return "1"
        return "".join(f"a{k + 1}" for k in range(n) if s >> k & 1)

    basis = [(label(s), bin(s).count("1")) for s in subsets]
    mult = {}
    for s in subsets:
        for t in subsets:
            if s & t == 0:
                mult[(pos[s], pos[t])] = (pos[s | t],)
    return GradedF2Algebra(n, basis, mult, unit_index=pos[0])


def _surface_algebra(g: int) -> GradedF2Algebra:
    # 1, a_1..a_g, b_1..b_g, top with a_i b_i = top and all other positive products zero
    basis = [("1", 0)]
    basis += [(f"a{i + 1}", 1) for i in range(g)]
    basis += [(f"b{i + 1}", 1) for i in range(g)]
    basis += [("top", 2)]
    top = 2 * g + 1
    mult = {(0, 0): (0,)}
    for i in range(1, 2 * g + 2):
        mult[(0, i)] = (i,)
        mult[(i, 0)] = (i,)
    for i in range(g):
        mult[(1 + i, 1 + g + i)] = (top,)
        mult[(1 + g + i, 1 + i)] = (top,)
    return GradedF2Algebra(2, basis, mult, unit_index=0)


def build_cohomology(s: SpaceDescriptor) -> GradedF2Algebra:
    """Mod-2 cohomology of a catalog space; products tensor their factors."""
    algs = []
    for a in s.atoms:
        if a.family == "point":
            algs.append(_point_algebra())
        elif a.family == "S":
            algs.append(_sphere_algebra(a.param))
        elif a.family == "RP":
            algs.append(_rp_algebra(a.param))
        elif a.family == "T":
            algs.append(_torus_algebra(a.param))
        elif a.family == "Sigma":
            algs.append(_surface_algebra(a.param))
        else:  # pragma: no cover
            raise AssertionError(a.family)
    out = algs[0]
    for nxt in algs[1:]:
        out = tensor_product(out, nxt)
    return out


# ------------------------------------------------------------- bound assembly


@dataclass
class BoundPair:
    lower: int
    lower_method: str
    upper: int
    upper_method: str
    lower_certificate: CupLengthCertificate | None = None


@dataclass
class BoundReport:
    space: SpaceDescriptor
    dim: int
    cl: int
    zdcl: int
    ncl: int
    tc: BoundPair
    tcs: BoundPair
    tcs_sigma: BoundPair
    flags: list[str] = field(default_factory=list)

    def published(self) -> dict:
        return self.space.published


class _SpaceContext:
    """Shared cup-length computations for one space."""

    def __init__(self, s: SpaceDescriptor):
        self.s = s
        self.A = build_cohomology(s)
        self.T = self.A.tensor_square()
        self.I = diagonal_kernel(self.T)
        self.N = norm_subspace(self.T)
        self.cl_cert = cup_length(self.A, positive_part(self.A))
        self.zd_cert = cup_length(self.T, self.I)
        self.n_cert = cup_length(self.T, self.N)


def _tc_bounds(ctx: _SpaceContext) -> BoundPair:
    s = ctx.s
    lower = ctx.zd_cert.length + 1
    pub = s.published.get("tc")
    if pub is not None:
        upper, umethod = pub[0], "published"
    else:
        upper, umethod = 2 * s.dim + 1, "catalog-annotation:2dim+1"
    return BoundPair(lower, "zero-divisor-cup-length+1", upper, umethod, ctx.zd_cert)


def _tcs_bounds(ctx: _SpaceContext) -> BoundPair:
    s = ctx.s
    if s.is_single_point:
        return BoundPair(1, "single-point", 1, "single-point")
    if s.is_closed_manifold:
        lower = max(2, ctx.n_cert.length + 2)
        lmethod = "norm-cup-length+2" if ctx.n_cert.length + 2 >= 2 else "positive-dimension"
        upper, umethod = 2 * s.dim + 1, "closed-manifold:2dim+1"
    else:
        lower, lmethod = 2, "positive-dimension"
        upper, umethod = 2 * s.dim + 2, "dimension:2dim+2"
    if len(s.atoms) == 1 and s.atoms[0].family == "S" and 3 <= upper:
        upper, umethod = 3, "sphere-planner:2-set-cover"
    return BoundPair(lower, lmethod, upper, umethod, ctx.n_cert)


def _tcs_sigma_bounds(ctx: _SpaceContext) -> BoundPair:
    s = ctx.s
    if s.is_single_point:
        return BoundPair(1, "single-point", 1, "single-point")
    tcs = _tcs_bounds(ctx)
    lower, lmethod, cert = tcs.lower, tcs.lower_method, tcs.lower_certificate
    if s.is_closed_manifold and s.is_aspherical:
        cand = 2 * ctx.cl_cert.length + 1
        if cand >= lower:
            lower, lmethod, cert = cand, "double-cup-length+1", ctx.cl_cert
    if s.is_closed_manifold:
        upper, umethod = 2 * s.dim + 1, "closed-manifold:2dim+1"
    else:
        upper, umethod = 2 * s.dim + 2, "dimension:2dim+2"
    return BoundPair(lower, lmethod, upper, umethod, cert)


def tc_bounds(s: SpaceDescriptor) -> BoundPair:
    return _tc_bounds(_SpaceContext(s))


def tcs_bounds(s: SpaceDescriptor) -> BoundPair:
    return _tcs_bounds(_SpaceContext(s))


def tcs_sigma_bounds(s: SpaceDescriptor) -> BoundPair:
    return _tcs_sigma_bounds(_SpaceContext(s))


def compute_report(s: SpaceDescriptor) -> BoundReport:
    ctx = _SpaceContext(s)
    report = BoundReport(
        space=s,
        dim=s.dim,
        cl=ctx.cl_cert.length,
        zdcl=ctx.zd_cert.length,
        ncl=ctx.n_cert.length,
        tc=_tc_bounds(ctx),
        tcs=_tcs_bounds(ctx),
        tcs_sigma=_tcs_sigma_bounds(ctx),
    )
    report.flags = _consistency_flags(report)
    return report


def _consistency_flags(r: BoundReport) -> list[str]:
    flags = []
    for name, bp in (("tc", r.tc), ("tcs", r.tcs), ("tcs_sigma", r.tcs_sigma)):
        if bp.lower > bp.upper:
            flags.append(f"{name}: lower {bp.lower} exceeds upper {bp.upper}")
    if r.tc.lower > r.tcs.upper:
        flags.append("tc lower exceeds tcs upper")
    if r.tcs.lower > r.tcs_sigma.upper:
        flags.append("tcs lower exceeds tcs_sigma upper")
    pub = r.space.published
    for name, bp in (("tc", r.tc), ("tcs", r.tcs), ("tcs_sigma", r.tcs_sigma)):
        if name in pub:
            v = pub[name][0]
            if not (bp.lower <= v <= bp.upper):
                flags.append(f"{name}: published {v} outside [{bp.lower}, {bp.upper}]")
    chain = [pub[k][0] for k in ("tc", "tcs", "tcs_sigma") if k in pub]
    if any(a > b for a, b in zip(chain, chain[1:])):
        flags.append("published values violate tc <= tcs <= tcs_sigma")
    if r.space.is_closed_manifold and not r.space.is_single_point:
        if r.ncl + 2 > 2 * r.dim + 1:
            flags.append("internal error: ncl+2 exceeds the closed-manifold upper bound")
    return flags


DEFAULT_SUITE = (
    [f"S^{n}" for n in range(1, 6)]
    + [f"T^{n}" for n in range(1, 5)]
    + [f"Sigma_{g}" for g in range(1, 4)]
    + [f"RP^{n}" for n in range(2, 5)]
)


def bound_table(specs) -> list[BoundReport]:
    """One report per spec; parse or consistency errors propagate per row."""
    reports = []
    for spec in specs:
        s = spec if isinstance(spec, SpaceDescriptor) else parse_space(spec)
        reports.append(compute_report(s))
    return reports


# ------------------------------------------------------------- serialization

CSV_COLUMNS = [
    "space",
    "dim",
    "cl",
    "zdcl",
    "ncl",
    "tc_lo",
    "tc_hi",
    "tcs_lo",
    "tcs_hi",
    "tcssig_lo",
    "tcssig_hi",
    "published_tc",
    "published_tcs",
    "published_tcssig",
]


def report_row(r: BoundReport) -> list:
    pub = r.space.published

    def p(key):
        return pub[key][0] if key in pub else ""

    return [
        r.space.spec,
        r.dim,
        r.cl,
        r.zdcl,
        r.ncl,
        r.tc.lower,
        r.tc.upper,
        r.tcs.lower,
        r.tcs.upper,
        r.tcs_sigma.lower,
        r.tcs_sigma.upper,
        p("tc"),
        p("tcs"),
        p("tcs_sigma"),
    ]


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow(report_row(r))
    return buf.getvalue()


def _bound_pair_json(bp: BoundPair, algebra=None, certificates=False) -> dict:
    d = {
        "lower": bp.lower,
        "lower_method": bp.lower_method,
        "upper": bp.upper,
        "upper_method": bp.upper_method,
    }
    if certificates and bp.lower_certificate is not None and algebra is not None:
        d["lower_certificate"] = bp.lower_certificate.to_json_dict(algebra)
    return d


def report_to_json_dict(r: BoundReport, certificates=False) -> dict:
    algebra = None
    tsq = None
    if certificates:
        algebra = build_cohomology(r.space)
        tsq = algebra.tensor_square()
    pub = {
        k: {"value": v, "citation": cite} for k, (v, cite) in sorted(r.space.published.items())
    }
    return {
        "space": r.space.spec,
        "dim": r.dim,
        "cl": r.cl,
        "zdcl": r.zdcl,
        "ncl": r.ncl,
        "bounds": {
            "tc": _bound_pair_json(r.tc, tsq, certificates),
            "tcs": _bound_pair_json(r.tcs, tsq, certificates),
            "tcs_sigma": _bound_pair_json(
                r.tcs_sigma,
                tsq if r.tcs_sigma.lower_method != "double-cup-length+1" else algebra,
                certificates,
            ),
        },
        "published": pub,
        "flags": list(r.flags),
    }


def reports_to_json(reports, certificates=False) -> str:
    return json.dumps(
        {"rows": [report_to_json_dict(r, certificates) for r in reports]},
        indent=2,
        sort_keys=False,
    )


def reports_to_text(reports) -> str:
    rows = [CSV_COLUMNS] + [[str(c) for c in report_row(r)] for r in reports]
    widths = [max(len(str(row[i])) for row in rows) for i in range(len(CSV_COLUMNS))]
    lines = []
    for row in rows:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"
