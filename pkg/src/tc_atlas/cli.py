"""Command-line entry point: bound tables, planning queries, verification runs,
and algebra inspection/round-trip.

Exit codes: 0 success, 1 domain error (undefined planner input, failed
verification), 2 usage error (bad flags, malformed space spec).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import harness, spaces
from .f2_algebra import GradedF2Algebra, cup_length, diagonal_kernel, norm_subspace, positive_part
from .planners import MetricTree, convex_plan, tree_plan
from .sphere import SphereConfig, SpherePlanner, sphere_point
from .torus import TorusMidpointConfig, TorusMidpointPlanner, TorusSymmetricPlanner, torus_point


class DomainError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tc-atlas")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="lower/upper bounds for one space")
    b.add_argument("space")
    b.add_argument("--format", choices=["json", "csv", "text"], default="text")
    b.add_argument("--certificates", action="store_true")

    t = sub.add_parser("table", help="bound table for several spaces")
    g = t.add_mutually_exclusive_group(required=True)
    g.add_argument("--spaces", help="comma-separated space specs")
    g.add_argument("--default-suite", action="store_true")
    t.add_argument("--format", choices=["json", "csv", "text"], default="text")

    pl = sub.add_parser("plan", help="plan a motion and emit a sampled polyline")
    pl.add_argument("space", help="S^n | T^n | box | tree:FILE")
    pl.add_argument("--a", required=True)
    pl.add_argument("--b", required=True)
    pl.add_argument("--samples", type=int, default=101)
    pl.add_argument("--midpoint-constant", action="store_true",
                    help="route through the base state at t = 1/2 (torus only)")

    v = sub.add_parser("verify", help="run the property suite against a planner")
    v.add_argument("planner", choices=["sphere", "torus", "torus-midpoint", "convex"])
    v.add_argument("--n", type=int, default=2)
    v.add_argument("--pairs", type=int, default=10000)
    v.add_argument("--seed", type=int, default=0)

    a = sub.add_parser("algebra", help="export/inspect a cohomology algebra")
    src = a.add_mutually_exclusive_group(required=True)
    src.add_argument("space", nargs="?")
    src.add_argument("--load", help="read an algebra JSON document instead")
    a.add_argument("--tensor-square", action="store_true")
    a.add_argument("--check", action="store_true", help="run the structural invariant checks")
    a.add_argument("--cup-length", choices=["positive", "zero-divisors", "norm"],
                   help="compute a cup length with its witness certificate")
    return p


def _cmd_bounds(args) -> int:
    report = spaces.compute_report(spaces.parse_space(args.space))
    if report.flags:
        print("; ".join(report.flags), file=sys.stderr)
        return 1
    if args.format == "json":
        print(spaces.reports_to_json([report], certificates=args.certificates))
    elif args.format == "csv":
        sys.stdout.write(spaces.reports_to_csv([report]))
    else:
        sys.stdout.write(spaces.reports_to_text([report]))
    return 0


def _cmd_table(args) -> int:
    specs = spaces.DEFAULT_SUITE if args.default_suite else [
        s.strip() for s in args.spaces.split(",") if s.strip()
    ]
    if not specs:
        raise spaces.SpaceSpecError("no spaces given")
    reports = spaces.bound_table(specs)
    bad = [r for r in reports if r.flags]
    if bad:
        for r in bad:
            print(f"{r.space.spec}: {'; '.join(r.flags)}", file=sys.stderr)
        return 1
    if args.format == "json":
        print(spaces.reports_to_json(reports))
    elif args.format == "csv":
        sys.stdout.write(spaces.reports_to_csv(reports))
    else:
        sys.stdout.write(spaces.reports_to_text(reports))
    return 0


def _parse_plan_point(space: str, raw: str, tree: MetricTree | None, n: int | None):
    try:
        if space.startswith("tree:"):
            e, t = raw.split()
            return (int(e), float(t))
        if space.startswith("T^"):
            return torus_point([float(x) for x in raw.split(",")], n)
        vals = [float(x) for x in raw.split()]
        if space.startswith("S^"):
            if n == 1 and len(vals) == 1:  # a single float on S^1 is an angle
                return np.array([np.cos(vals[0]), np.sin(vals[0])])
            v = np.asarray(vals, float)
            norm = np.linalg.norm(v)
            if abs(norm - 1.0) > 1e-6:
                print(f"warning: input norm {norm:.9g} deviates from 1; renormalizing",
                      file=sys.stderr)
            return sphere_point(vals, n)
        return np.asarray(vals, float)
    except (ValueError, TypeError) as exc:
        raise spaces.SpaceSpecError(f"bad point {raw!r} for {space}: {exc}") from exc


def _cmd_plan(args) -> int:
    space = args.space.strip()
    samples = args.samples
    if samples < 2:
        raise DomainError("--samples must be at least 2")
    ts = harness.symmetric_time_grid(samples)
    tree = None
    n = None
    if space.startswith("tree:"):
        with open(space[5:], "r", encoding="utf-8") as fh:
            tree = MetricTree.from_text(fh.read())
    elif space.startswith("S^") or space.startswith("T^"):
        n = int(space[2:])
        if n < 1:
            raise spaces.SpaceSpecError(f"bad dimension in {space!r}")
    elif space != "box":
        raise spaces.SpaceSpecError(f"plan supports S^n, T^n, box or tree:FILE, not {space!r}")
    A = _parse_plan_point(space, args.a, tree, n)
    B = _parse_plan_point(space, args.b, tree, n)

    doc: dict
    if args.midpoint_constant:
        if not space.startswith("T^"):
            raise spaces.SpaceSpecError("--midpoint-constant requires a torus space T^n")
        planner = TorusMidpointPlanner(TorusMidpointConfig(n))
        try:
            out = planner.plan(A, B)
        except ValueError as exc:
            raise DomainError(str(exc)) from exc
        digits = np.base_repr(out.region, base=4).zfill(n)[::-1][:n]
        doc = {"region": out.region, "region_code": digits,
               "samples": out.path.eval(ts).tolist()}
    elif space.startswith("S^"):
        out = SpherePlanner(SphereConfig(n)).plan(A, B)
        doc = {"region": out.region, "samples": out.path.eval(ts).tolist()}
    elif space.startswith("T^"):
        out = TorusSymmetricPlanner(n).plan(A, B)
        digits = np.base_repr(out.region, base=3).zfill(n)[::-1][:n]
        doc = {"region": out.region, "region_code": digits,
               "samples": out.path.eval(ts).tolist()}
    elif space == "box":
        out = convex_plan(A, B)
        doc = {"region": out.region, "samples": out.path.eval(ts).tolist()}
    else:
        try:
            out = tree_plan(tree, A, B)
        except ValueError as exc:
            raise DomainError(str(exc)) from exc
        doc = {"region": out.region, "samples": out.path.eval(ts).tolist()}
    print(json.dumps(doc))
    return 0


def _cmd_verify(args) -> int:
    if args.n < 1 or args.pairs < 1:
        raise DomainError("--n and --pairs must be positive")
    tolerances = {}
    if args.planner in ("torus", "torus-midpoint"):
        tolerances["symmetry"] = 1e-12
    case = harness.standard_case(args.planner, args.n)
    cfg = harness.CheckConfig(sample_pairs=args.pairs, seed=args.seed, tolerances=tolerances)
    report = harness.check_planner(case, cfg)
    print(report.to_json())
    return 0 if report.all_pass else 1


def _algebra_for(args) -> GradedF2Algebra:
    if args.load:
        with open(args.load, "r", encoding="utf-8") as fh:
            return GradedF2Algebra.from_json(fh.read())
    A = spaces.build_cohomology(spaces.parse_space(args.space))
    return A


def _cmd_algebra(args) -> int:
    A = _algebra_for(args)
    if args.tensor_square or args.cup_length in ("zero-divisors", "norm"):
        T = A.tensor_square()
    use = T if args.tensor_square else A
    if args.check:
        use.validate()
    doc = use.to_json_dict()
    if args.cup_length:
        if args.cup_length == "positive":
            cert = cup_length(use, positive_part(use))
            doc["cup_length"] = cert.to_json_dict(use)
        else:
            sub = diagonal_kernel(T) if args.cup_length == "zero-divisors" else norm_subspace(T)
            cert = cup_length(T, sub)
            doc["cup_length"] = cert.to_json_dict(T)
    if args.check:
        doc["checked"] = True
    print(json.dumps(doc, indent=2))
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        if args.command == "bounds":
            return _cmd_bounds(args)
        if args.command == "table":
            return _cmd_table(args)
        if args.command == "plan":
            return _cmd_plan(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "algebra":
            return _cmd_algebra(args)
    except spaces.SpaceSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
