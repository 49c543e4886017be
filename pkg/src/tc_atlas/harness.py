"""Property-test engine for motion planners.

Checks, per seeded sample of endpoint pairs: endpoint exactness, the exact
time-reversal identity s(B,A)(t) = s(A,B)(1-t), optional prescribed-midpoint
exactness, sampled per-region continuity ratios under small perturbations,
region-code coverage, and planner-declared region-code requirements.

Sampling uses numpy's counter-based Philox generator and all random draws are
materialized up front, so a report is a pure function of (planner, config):
bit-identical across runs and across thread counts. TC_ATLAS_THREADS
optionally fans the per-pair evaluation out over a thread pool.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .planners import TWO_PI, angle_distance
from .sphere import SphereConfig, SpherePlanner, sphere_distance
from .torus import TorusMidpointConfig, TorusMidpointPlanner, TorusSymmetricPlanner

RNG_NAME = "philox4x64 (numpy Philox, counter-based)"


def default_tolerances() -> dict:
    return {
        "endpoint": 1e-9,
        "symmetry": 1e-9,
        "midpoint": 1e-12,
        "continuity_ratio": 1e3,
        "boundary_margin": 1e-3,
        "perturbation_h": 1e-5,
    }


@dataclass
class CheckConfig:
    sample_pairs: int = 10000
    t_samples: int = 101
    seed: int = 0
    tolerances: dict = field(default_factory=default_tolerances)

    def __post_init__(self):
        tol = default_tolerances()
        tol.update(self.tolerances)
        self.tolerances = tol
        if self.sample_pairs < 1 or self.t_samples < 3 or self.seed < 0:
            raise ValueError("sample_pairs, t_samples and seed must be positive")
        if any(v <= 0 for v in self.tolerances.values()):
            raise ValueError("tolerances must be positive")


def symmetric_time_grid(m: int) -> np.ndarray:
    """m samples of [0, 1], mirrored onto dyadic rationals so that the grid
    reversed is exactly 1 minus the grid (makes time-reversal checks exact)."""
    g = np.linspace(0.0, 1.0, m)
    snapped = np.round(g * 2.0**40) / 2.0**40
    grid = snapped.copy()
    h = m // 2
    grid[m - h :] = 1.0 - snapped[:h][::-1]
    return grid


# -------------------------------------------------------------- space adapters


class SphereSpace:
    name = "sphere"

    def __init__(self, n: int):
        self.n = n

    def sample(self, rng) -> np.ndarray:
        while True:
            v = rng.normal(size=self.n + 1)
            nv = np.linalg.norm(v)
            if nv > 1e-12:
                return v / nv

    def distance(self, p, q) -> float:
        return sphere_distance(p, q)

    def dist_many(self, P, Q) -> np.ndarray:
        chord = 0.5 * np.linalg.norm(P - Q, axis=1)
        return 2.0 * np.arcsin(np.minimum(1.0, chord))

    def perturb(self, p, h: float, direction) -> np.ndarray:
        v = direction - np.dot(direction, p) * p
        nv = np.linalg.norm(v)
        if nv < 1e-12:
            return p.copy()
        v = v / nv
        out = np.cos(h) * p + np.sin(h) * v
        return out / np.linalg.norm(out)

    def direction_dim(self) -> int:
        return self.n + 1


class TorusSpace:
    name = "torus"

    def __init__(self, n: int):
        self.n = n

    def sample(self, rng) -> np.ndarray:
        return rng.uniform(0.0, TWO_PI, self.n)

    def distance(self, p, q) -> float:
        return float(np.max(angle_distance(p, q)))

    def dist_many(self, P, Q) -> np.ndarray:
        return np.max(angle_distance(P, Q), axis=1)

    def perturb(self, p, h: float, direction) -> np.ndarray:
        nv = np.linalg.norm(direction)
        if nv < 1e-12:
            return p.copy()
        return np.mod(p + h * direction / nv, TWO_PI)

    def direction_dim(self) -> int:
        return self.n


class BoxSpace:
    name = "box"

    def __init__(self, d: int = 2):
        self.d = d

    def sample(self, rng) -> np.ndarray:
        return rng.uniform(0.0, 1.0, self.d)

    def distance(self, p, q) -> float:
        return float(np.linalg.norm(p - q))

    def dist_many(self, P, Q) -> np.ndarray:
        return np.linalg.norm(P - Q, axis=1)

    def perturb(self, p, h: float, direction) -> np.ndarray:
        nv = np.linalg.norm(direction)
        if nv < 1e-12:
            return p.copy()
        return np.clip(p + h * direction / nv, 0.0, 1.0)

    def direction_dim(self) -> int:
        return self.d


# ------------------------------------------------------------------- the case


@dataclass
class HarnessCase:
    """A planner wired to its space with the metadata the checks need."""

    name: str
    space: object
    plan: callable
    supports_diagonal: bool = True
    margin: callable = None
    midpoint: callable = None
    region_subset: frozenset | None = None
    offdiag_region_subset: frozenset | None = None
    min_distinct_offdiag: int | None = None


def standard_case(name: str, n: int = 2) -> HarnessCase:
    """The four named planners exposed by the verification commands."""
    if name == "sphere":
        planner = SpherePlanner(SphereConfig(n))
        return HarnessCase(
            name=f"sphere(n={n})",
            space=SphereSpace(n),
            plan=planner.plan,
            supports_diagonal=True,
            margin=planner.margin,
            region_subset=frozenset({0, 1, 2}),
            offdiag_region_subset=frozenset({1, 2}),
        )
    if name == "torus":
        planner = TorusSymmetricPlanner(n)
        return HarnessCase(
            name=f"torus(n={n})",
            space=TorusSpace(n),
            plan=planner.plan,
            supports_diagonal=True,
            margin=planner.margin,
            region_subset=frozenset(range(planner.region_count)),
        )
    if name == "torus-midpoint":
        planner = TorusMidpointPlanner(TorusMidpointConfig(n))
        return HarnessCase(
            name=f"torus-midpoint(n={n})",
            space=TorusSpace(n),
            plan=planner.plan,
            supports_diagonal=False,
            margin=planner.margin,
            midpoint=planner.midpoint_map(),
            region_subset=frozenset(range(planner.region_count)),
            min_distinct_offdiag=2 * n + 1,
        )
    if name == "convex":
        from .planners import convex_plan

        return HarnessCase(
            name=f"convex(d={n})",
            space=BoxSpace(n),
            plan=convex_plan,
            supports_diagonal=True,
            margin=lambda A, B: np.inf,
            region_subset=frozenset({0}),
        )
    raise ValueError(f"unknown planner {name!r}")


# --------------------------------------------------------------------- report


@dataclass
class PlannerCheckReport:
    planner: str
    seed: int
    rng: str
    properties: dict
    region_histogram: dict
    continuity_by_region: dict
    coverage: bool
    config: dict

    @property
    def all_pass(self) -> bool:
        return all(p["pass"] for p in self.properties.values())

    def to_json_dict(self) -> dict:
        return {
            "planner": self.planner,
            "seed": self.seed,
            "rng": self.rng,
            "properties": self.properties,
            "region_histogram": {str(k): v for k, v in sorted(self.region_histogram.items())},
            "continuity_by_region": {
                str(k): v for k, v in sorted(self.continuity_by_region.items())
            },
            "coverage": self.coverage,
            "config": self.config,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


# ------------------------------------------------------------------ the check


def _thread_count() -> int:
    raw = os.environ.get("TC_ATLAS_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def check_planner(case: HarnessCase, cfg: CheckConfig) -> PlannerCheckReport:
    tol = cfg.tolerances
    grid = symmetric_time_grid(cfg.t_samples)
    rng = np.random.Generator(np.random.Philox(cfg.seed))
    m = cfg.sample_pairs
    As = np.array([case.space.sample(rng) for _ in range(m)])
    Bs = np.array([case.space.sample(rng) for _ in range(m)])
    ddim = case.space.direction_dim()
    dirA = rng.normal(size=(m, ddim))
    dirB = rng.normal(size=(m, ddim))
    n_diag = min(64, m) if case.supports_diagonal else 0

    h = tol["perturbation_h"]
    margin = tol["boundary_margin"]

    def eval_range(lo: int, hi: int) -> dict:
        acc = {
            "endpoint": 0.0,
            "symmetry": 0.0,
            "midpoint": 0.0,
            "failures": 0,
            "hist": {},
            "cont": {},
            "offdiag_regions": set(),
            "region_ok": True,
        }
        for i in range(lo, hi):
            A, B = As[i], Bs[i]
            if case.space.distance(A, B) <= 1e-9:
                continue
            try:
                out_ab = case.plan(A, B)
                out_ba = case.plan(B, A)
            except Exception:
                acc["failures"] += 1
                continue
            acc["hist"][out_ab.region] = acc["hist"].get(out_ab.region, 0) + 1
            acc["offdiag_regions"].add(out_ab.region)
            if case.offdiag_region_subset is not None and (
                out_ab.region not in case.offdiag_region_subset
                or out_ba.region not in case.offdiag_region_subset
            ):
                acc["region_ok"] = False
            pa = out_ab.path.eval(grid)
            pb = out_ba.path.eval(grid)
            acc["endpoint"] = max(
                acc["endpoint"],
                case.space.distance(pa[0], A),
                case.space.distance(pa[-1], B),
            )
            acc["symmetry"] = max(acc["symmetry"], float(np.max(case.space.dist_many(pb, pa[::-1]))))
            if case.midpoint is not None:
                mid = np.atleast_1d(case.midpoint(A, B))
                acc["midpoint"] = max(
                    acc["midpoint"], case.space.distance(out_ab.path.eval(0.5), mid)
                )
            # sampled continuity away from rule boundaries
            if case.margin is not None and case.margin(A, B) >= margin:
                Ah = case.space.perturb(A, h, dirA[i])
                Bh = case.space.perturb(B, h, dirB[i])
                try:
                    out_h = case.plan(Ah, Bh)
                except Exception:
                    acc["failures"] += 1
                    continue
                if out_h.region == out_ab.region:
                    dev = float(np.max(case.space.dist_many(out_h.path.eval(grid), pa)))
                    r = out_ab.region
                    acc["cont"][r] = max(acc["cont"].get(r, 0.0), dev / h)
        return acc

    threads = _thread_count()
    if threads > 1 and m >= 4 * threads:
        bounds = np.linspace(0, m, threads + 1).astype(int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda se: eval_range(se[0], se[1]), zip(bounds, bounds[1:])))
    else:
        parts = [eval_range(0, m)]

    acc = parts[0]
    for p in parts[1:]:
        acc["endpoint"] = max(acc["endpoint"], p["endpoint"])
        acc["symmetry"] = max(acc["symmetry"], p["symmetry"])
        acc["midpoint"] = max(acc["midpoint"], p["midpoint"])
        acc["failures"] += p["failures"]
        for k, v in p["hist"].items():
            acc["hist"][k] = acc["hist"].get(k, 0) + v
        for k, v in p["cont"].items():
            acc["cont"][k] = max(acc["cont"].get(k, 0.0), v)
        acc["offdiag_regions"] |= p["offdiag_regions"]
        acc["region_ok"] = acc["region_ok"] and p["region_ok"]

    # diagonal probes: constancy of s(A, A) and the region-0 rule
    diag_err = 0.0
    for i in range(n_diag):
        A = As[i]
        try:
            out = case.plan(A, A)
        except Exception:
            acc["failures"] += 1
            continue
        acc["hist"][out.region] = acc["hist"].get(out.region, 0) + 1
        pts = out.path.eval(grid)
        diag_err = max(diag_err, float(np.max(case.space.dist_many(pts, np.broadcast_to(A, pts.shape)))))

    properties = {}

    def prop(name, max_error, threshold):
        properties[name] = {"max_error": float(max_error), "pass": bool(max_error <= threshold)}

    prop("endpoint", acc["endpoint"], tol["endpoint"])
    prop("symmetry", acc["symmetry"], tol["symmetry"])
    if case.midpoint is not None:
        prop("midpoint", acc["midpoint"], tol["midpoint"])
    if case.supports_diagonal:
        prop("diagonal_constancy", diag_err, tol["endpoint"])
    cont_max = max(acc["cont"].values()) if acc["cont"] else 0.0
    prop("continuity_ratio", cont_max, tol["continuity_ratio"])
    coverage_ok = acc["failures"] == 0
    properties["coverage"] = {"max_error": float(acc["failures"]), "pass": coverage_ok}
    if case.region_subset is not None:
        bad = set(acc["hist"]) - set(case.region_subset)
        ok = not bad and acc["region_ok"]
        properties["region_codes"] = {"max_error": float(len(bad)), "pass": bool(ok)}
    if case.min_distinct_offdiag is not None:
        seen = len(acc["offdiag_regions"])
        properties["region_distinct"] = {
            "max_error": float(max(0, case.min_distinct_offdiag - seen)),
            "pass": bool(seen >= case.min_distinct_offdiag),
        }

    return PlannerCheckReport(
        planner=case.name,
        seed=cfg.seed,
        rng=RNG_NAME,
        properties=properties,
        region_histogram=dict(sorted(acc["hist"].items())),
        continuity_by_region={k: float(v) for k, v in sorted(acc["cont"].items())},
        coverage=coverage_ok,
        config={
            "sample_pairs": cfg.sample_pairs,
            "t_samples": cfg.t_samples,
            "tolerances": dict(sorted(cfg.tolerances.items())),
        },
    )
