"""Scenario files, the built-in scenario library, and the check runners.

A scenario is a JSON document (schema_version 1): a field, optional feedback
and Lyapunov sources, a seed, and a list of named checks with parameters.
Runs are deterministic given the seed; reports serialize canonically.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from . import __version__
from .conditions import (
    ClosedCurve,
    ConditionReport,
    ControlNeighborhood,
    CycleConfig,
    brockett_surjectivity_check,
    classify_homotopy_class,
    closed_loop_index_check,
    flat_torus_index_check,
    hemisphere_test,
    isotopy_check,
    locate_limit_cycle,
    poincare_hopf_check,
    preimage_count_check,
)
from .degree import DegreeConfig, degree, topological_index
from .errors import FieldTopoError, ParseError, ScenarioError
from .fieldlang import (
    FieldSpec,
    ScalarSpec,
    close_loop,
    field_function_vectorized,
    parse_feedback,
    parse_field,
    parse_scalar,
)
from .levelset import extract_level_set
from .mesh import SimplicialMesh, builtin_klein_bottle, builtin_projective_plane
from .homology import (
    chain_complex_of,
    euler_characteristic,
    homology_groups,
)
from .spheres import build_sphere_mesh
from .tubes import tubular_neighborhood_mesh

SCHEMA_VERSION = 1
TWO_PI = 2.0 * math.pi


@dataclass
class RunReport:
    scenario: str
    version: str
    aggregate: str  # pass | violated
    reports: list[ConditionReport] = dataclass_field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "version": self.version,
            "aggregate": self.aggregate,
            "reports": [r.to_dict() for r in self.reports],
        }


@dataclass
class _Context:
    scenario: dict
    field: FieldSpec
    feedback: FieldSpec | None
    lyapunov: ScalarSpec | None
    seed: int
    refinement: int | None  # global override for constructed meshes


def _closed_field(ctx: _Context) -> FieldSpec:
    """The scenario dynamics with any feedback substituted in (m = 0)."""
    if ctx.field.m == 0:
        return ctx.field
    if ctx.feedback is None:
        raise ScenarioError("this check needs closed dynamics: add a feedback source")
    return close_loop(ctx.field, ctx.feedback)


# ---------------------------------------------------------------------------
# Mesh construction from scenario parameters


def _mesh_from_spec(spec: dict, ctx: _Context) -> SimplicialMesh:
    kind = spec.get("type")
    if kind == "sphere":
        n = int(spec.get("n", ctx.field.n))
        # a run-level refinement override beats per-check values
        refinement = ctx.refinement
        if refinement is None:
            refinement = spec.get("refinement")
        if refinement is None:
            refinement = {2: 4, 3: 2}.get(n, 1)
        return build_sphere_mesh(
            n, spec.get("center", [0.0] * n), float(spec["radius"]), int(refinement)
        )
    if kind == "level-set":
        if ctx.lyapunov is None:
            raise ScenarioError("level-set mesh needs a lyapunov source")
        return extract_level_set(
            ctx.lyapunov,
            float(spec["level"]),
            spec["box"],
            int(spec.get("resolution", 24)),
        )
    if kind == "tube-torus":
        samples = int(spec.get("samples", 24))
        radius_c = float(spec.get("curve_radius", 1.0))
        theta = np.linspace(0.0, TWO_PI, samples + 1)
        curve = np.column_stack(
            [radius_c * np.cos(theta), radius_c * np.sin(theta), 0.0 * theta]
        )
        return tubular_neighborhood_mesh(
            curve, float(spec["radius"]), int(spec.get("resolution", 12))
        )
    if kind == "klein-bottle":
        return builtin_klein_bottle()
    if kind == "projective-plane":
        return builtin_projective_plane()
    raise ScenarioError(f"unknown mesh type {kind!r}")


def _gauss_evidence(f: FieldSpec, mesh: SimplicialMesh) -> dict | None:
    """Sampled Gauss image for rendering (2-d or 3-d)."""
    if f.n not in (2, 3):
        return None
    vals = field_function_vectorized(f)(mesh.vertices.T)
    norms = np.linalg.norm(vals, axis=1)
    G = vals / norms[:, None]
    step = max(1, len(G) // 256)
    label = "gauss_image" if f.n == 2 else "gauss_image3d"
    return {"label": label, "values": [float(v) for v in G[::step].ravel()]}


# ---------------------------------------------------------------------------
# Check runners


def _run_degree(ctx: _Context, params: dict, seed: int) -> ConditionReport:
    t0 = time.perf_counter()
    mesh_spec = params.get("mesh", {"type": "sphere", "radius": 1.0})
    mesh = _mesh_from_spec(mesh_spec, ctx)
    cfg = DegreeConfig(seed=seed)
    f = _closed_field(ctx)
    result = degree(f, mesh, cfg)
    expected = params.get("expected")
    verdict = "pass" if expected is None or result.degree == int(expected) else "violated"
    evidence = [
        {"label": "degree", "values": [float(result.degree), result.raw, result.residual]}
    ]
    if result.regular_value is not None:
        evidence.append(
            {"label": "regular_value", "values": list(result.regular_value)}
        )
    extra = _gauss_evidence(f, mesh)
    if extra:
        evidence.append(extra)
    return ConditionReport(
        "degree", verdict,
        int(expected) if expected is not None else result.degree, result.degree,
        {"snap_tol": cfg.snap_tol, "exact": True}, seed, evidence,
        (time.perf_counter() - t0) * 1000.0,
    )


def _run_topological_index(ctx: _Context, params: dict, seed: int) -> ConditionReport:
    t0 = time.perf_counter()
    center = params.get("center", [0.0] * ctx.field.n)
    radius = float(params.get("radius", 0.5))
    result = topological_index(_closed_field(ctx), center, radius, DegreeConfig(seed=seed))
    expected = params.get("expected")
    verdict = "pass" if expected is None or result.degree == int(expected) else "violated"
    return ConditionReport(
        "topological_index", verdict,
        int(expected) if expected is not None else result.degree, result.degree,
        {"radius": radius, "exact": True}, seed,
        [{"label": "index", "values": [float(result.degree), result.raw, result.residual]}],
        (time.perf_counter() - t0) * 1000.0,
    )


def _run_poincare_hopf(ctx: _Context, params: dict, seed: int) -> ConditionReport:
    boundary = [_mesh_from_spec(s, ctx) for s in params["boundary"]]
    return poincare_hopf_check(
        _closed_field(ctx), boundary, params["region"],
        grid=int(params.get("grid", 9)), tol=float(params.get("tol", 1e-9)),
        seed=seed, config=DegreeConfig(seed=seed),
    )


def _run_flat_torus(ctx: _Context, params: dict, seed: int) -> ConditionReport:
    return flat_torus_index_check(
        _closed_field(ctx), params["box"],
        grid=int(params.get("grid", 9)), tol=float(params.get("tol", 1e-9)),
        seed=seed,
    )


def _run_brockett(ctx: _Context, params: dict, seed: int) -> ConditionReport:
    nbhd = ControlNeighborhood(
        state_radius=float(params.get("state_radius", 0.25)),
        control_radius=float(params.get("control_radius", 1.0)),
        epsilon=float(params.get("epsilon", 0.1)),
        grid_size=int(params.get("grid_size", 32)),
        budget=int(params.get("budget", 400_000)),
        starts=int(params.get("starts", 16)),
    )
    return brockett_surjectivity_check(ctx.field, nbhd, seed=seed)


def _run_closed_loop_index(ctx: _Context, params: dict, seed: int) -> ConditionReport:
    if ctx.feedback is None:
        raise ScenarioError("closed_loop_index needs a feedback source")
    return closed_loop_index_check(
        ctx.field, ctx.feedback,
        params.get("center", [0.0] * ctx.field.n),
        float(params.get("radius", 0.5)),
        expected_k=int(params.get("expected_k", 0)),
        tol=float(params.get("tol", 1e-9)),
        seed=seed, config=DegreeConfig(seed=seed),
    )


def _locate(ctx: _Context, params: dict) -> ClosedCurve:
    cfg = CycleConfig(
        dt=float(params.get("dt", 0.002)),
        max_time=float(params.get("max_time", 400.0)),
        samples=int(params.get("samples", 512)),
    )
    return locate_limit_cycle(_closed_field(ctx), params["seed_point"], cfg)


def _run_limit_cycle_hemisphere(ctx: _Context, params: dict, seed: int) -> ConditionReport:
    cycle = _locate(ctx, params)
    return hemisphere_test(
        _closed_field(ctx), cycle, normal_grid=int(params.get("normal_grid", 64)), seed=seed
    )


def _run_cycle_tube_class(ctx: _Context, params: dict, seed: int) -> ConditionReport:
    cycle = _locate(ctx, params)
    if ctx.field.n != 2:
        raise ScenarioError("cycle_tube_class embeds a planar cycle")
    stride = max(1, len(cycle.points) // int(params.get("tube_samples", 64)))
    pts = cycle.points[::stride]
    pts3 = np.column_stack([pts, np.zeros(len(pts))])
    pts3 = np.vstack([pts3, pts3[:1]])
    tube = tubular_neighborhood_mesh(
        pts3, float(params.get("tube_radius", 0.2)), int(params.get("resolution", 12))
    )
    field3d = parse_field(params["field3d"], 3, 0)
    report = classify_homotopy_class(
        tube, field3d, expected=params.get("expected"), seed=seed,
        config=DegreeConfig(seed=seed),
    )
    report.condition = "cycle_tube_class"
    return report


def _run_isotopy(ctx: _Context, params: dict, seed: int) -> ConditionReport:
    if ctx.lyapunov is None:
        raise ScenarioError("isotopy needs a lyapunov source")
    mesh = _mesh_from_spec(
        {
            "type": "level-set",
            "level": params.get("level", 0.5),
            "box": params["box"],
            "resolution": params.get("resolution", 24),
        },
        ctx,
    )
    return isotopy_check(
        _closed_field(ctx), ctx.lyapunov, mesh,
        t_grid=int(params.get("t_grid", 32)), seed=seed,
        config=DegreeConfig(seed=seed),
    )


def _run_preimage_count(ctx: _Context, params: dict, seed: int) -> ConditionReport:
    if ctx.lyapunov is None:
        raise ScenarioError("preimage_count needs a lyapunov source")
    mesh = _mesh_from_spec(
        {
            "type": "level-set",
            "level": params.get("level", 0.04),
            "box": params["box"],
            "resolution": params.get("resolution", 24),
        },
        ctx,
    )
    return preimage_count_check(
        ctx.lyapunov, mesh,
        direction_grid=int(params.get("direction_grid", 128)),
        seed=seed, config=DegreeConfig(seed=seed),
    )


def _run_homology(ctx: _Context, params: dict, seed: int) -> ConditionReport:
    t0 = time.perf_counter()
    mesh = _mesh_from_spec(params["mesh"], ctx)
    groups = homology_groups(chain_complex_of(mesh))
    betti = [g.betti for g in groups]
    torsion = [list(g.torsion) for g in groups]
    chi = euler_characteristic(mesh)
    expected_betti = params.get("expected_betti")
    expected_torsion = params.get("expected_torsion")
    ok = expected_betti is None or list(expected_betti) == betti
    if ok and expected_torsion is not None:
        ok = [list(t) for t in expected_torsion] == torsion
    # one record per dimension: [dimension, betti, torsion...]
    evidence = [
        {
            "label": "homology",
            "values": [float(k), float(b)] + [float(v) for v in t],
        }
        for k, (b, t) in enumerate(zip(betti, torsion))
    ]
    evidence.append({"label": "euler_characteristic", "values": [float(chi)]})
    return ConditionReport(
        "homology", "pass" if ok else "violated",
        str(expected_betti) if expected_betti is not None else str(betti),
        str(betti), {"exact": True}, seed, evidence,
        (time.perf_counter() - t0) * 1000.0,
    )


CHECKS = {
    "degree": _run_degree,
    "topological_index": _run_topological_index,
    "poincare_hopf": _run_poincare_hopf,
    "flat_torus_index": _run_flat_torus,
    "brockett_surjectivity": _run_brockett,
    "closed_loop_index": _run_closed_loop_index,
    "limit_cycle_hemisphere": _run_limit_cycle_hemisphere,
    "cycle_tube_class": _run_cycle_tube_class,
    "isotopy": _run_isotopy,
    "preimage_count": _run_preimage_count,
    "homology": _run_homology,
}


# ---------------------------------------------------------------------------
# Validation


def validate_scenario(raw: dict) -> dict:
    if not isinstance(raw, dict):
        raise ScenarioError("scenario must be a JSON object")
    problems = []
    if raw.get("schema_version") != SCHEMA_VERSION:
        problems.append(f"schema_version must be {SCHEMA_VERSION}")
    name = raw.get("name")
    if not isinstance(name, str) or not name:
        problems.append("name must be a non-empty string")
    fspec = raw.get("field")
    if not isinstance(fspec, dict) or "source" not in fspec or "n" not in fspec:
        problems.append("field must be an object with source and n")
    checks = raw.get("checks")
    if not isinstance(checks, list) or not checks:
        problems.append("checks must be a non-empty list")
    else:
        for i, chk in enumerate(checks):
            if not isinstance(chk, dict) or "check" not in chk:
                problems.append(f"check #{i} must be an object with a 'check' name")
            elif chk["check"] not in CHECKS:
                problems.append(f"unknown check {chk['check']!r}")
    seed = raw.get("seed", 0)
    if not isinstance(seed, int):
        problems.append("seed must be an integer")
    if problems:
        raise ScenarioError("; ".join(problems))
    return raw


def _build_context(raw: dict, seed_override, refinement) -> _Context:
    fspec = raw["field"]
    try:
        f = parse_field(fspec["source"], int(fspec["n"]), int(fspec.get("m", 0)))
        feedback = None
        if raw.get("feedback"):
            feedback = parse_feedback(raw["feedback"]["source"], f.n, f.m)
        lyapunov = None
        if raw.get("lyapunov"):
            lyapunov = parse_scalar(raw["lyapunov"]["source"], f.n)
    except ParseError as exc:
        raise ScenarioError(f"bad expression source: {exc}") from exc
    seed = raw.get("seed", 0) if seed_override is None else int(seed_override)
    return _Context(raw, f, feedback, lyapunov, seed, refinement)


def run_scenario(scenario, seed: int | None = None, refinement: int | None = None) -> RunReport:
    """Run a scenario by built-in name or from a scenario dict.

    Checks run in declared order; any checker error becomes a `degenerate`
    report rather than aborting the run.  Deterministic given the seed.
    """
    if isinstance(scenario, str):
        if scenario not in BUILTIN_SCENARIOS:
            raise ScenarioError(f"unknown built-in scenario {scenario!r}")
        raw = BUILTIN_SCENARIOS[scenario]
    else:
        raw = scenario
    raw = validate_scenario(raw)
    ctx = _build_context(raw, seed, refinement)

    reports = []
    for index, chk in enumerate(raw["checks"]):
        params = {k: v for k, v in chk.items() if k != "check"}
        check_seed = int(params.pop("seed", ctx.seed + index))
        runner = CHECKS[chk["check"]]
        try:
            reports.append(runner(ctx, params, check_seed))
        except ScenarioError:
            raise
        except FieldTopoError as exc:
            reports.append(
                ConditionReport(
                    chk["check"], "degenerate", None, None, {}, check_seed,
                    [{"label": "error", "values": []}, {"label": type(exc).__name__, "values": []}],
                    0.0,
                )
            )
    aggregate = "pass" if all(r.verdict == "pass" for r in reports) else "violated"
    return RunReport(raw["name"], __version__, aggregate, reports)


def list_scenarios() -> list[dict]:
    return [
        {"name": name, "description": sc.get("description", "")}
        for name, sc in sorted(BUILTIN_SCENARIOS.items())
    ]


# ---------------------------------------------------------------------------
# Built-in scenario library


def _linear_attractor(n: int) -> dict:
    source = ", ".join(f"-x{i + 1}" for i in range(n))
    return {
        "schema_version": 1,
        "name": f"linear-attractor-{n}d",
        "description": f"x' = -x in dimension {n}: index (-1)^{n} at the origin",
        "field": {"source": source, "n": n, "m": 0},
        "seed": 0,
        "checks": [
            {
                "check": "topological_index",
                "center": [0.0] * n,
                "radius": 0.5,
                "expected": (-1) ** n,
            }
        ],
    }


_Z_POWER_SOURCES = {
    1: ("x1", "x2"),
    2: ("x1^2 - x2^2", "2*x1*x2"),
    3: ("x1^3 - 3*x1*x2^2", "3*x1^2*x2 - x2^3"),
    4: ("x1^4 - 6*x1^2*x2^2 + x2^4", "4*x1^3*x2 - 4*x1*x2^3"),
}


def _z_power(k: int, conjugate: bool = False) -> dict:
    # real and imaginary parts of z^k; conjugation mirrors the second one
    re_src, im_src = _Z_POWER_SOURCES[k]
    if conjugate:
        im_src = f"0 - ({im_src})"
    name = f"z-power-conj-{k}" if conjugate else f"z-power-{k}"
    return {
        "schema_version": 1,
        "name": name,
        "description": f"planar field z' = {'conj(z)' if conjugate else 'z'}^{k}: "
        f"Gauss degree {-k if conjugate else k} on the unit circle",
        "field": {"source": f"{re_src}, {im_src}", "n": 2, "m": 0},
        "seed": 0,
        "checks": [
            {
                "check": "degree",
                "mesh": {"type": "sphere", "center": [0.0, 0.0], "radius": 1.0, "refinement": 4},
                "expected": -k if conjugate else k,
            }
        ],
    }


BUILTIN_SCENARIOS: dict[str, dict] = {}
for _n in (1, 2, 3, 4):
    sc = _linear_attractor(_n)
    BUILTIN_SCENARIOS[sc["name"]] = sc
for _k in (1, 2, 3, 4):
    for _conj in (False, True):
        sc = _z_power(_k, _conj)
        BUILTIN_SCENARIOS[sc["name"]] = sc

BUILTIN_SCENARIOS["linear-attractor-3d"] = {
    "schema_version": 1,
    "name": "linear-attractor-3d",
    "description": "x' = -x + u with u = 0 in R^3: closed-loop index (-1)^3 and "
    "Gauss-map isotopy on a Lyapunov sphere",
    "field": {"source": "-x1 + u1, -x2 + u2, -x3 + u3", "n": 3, "m": 3},
    "feedback": {"source": "0, 0, 0"},
    "lyapunov": {"source": "(x1^2 + x2^2 + x3^2)/2"},
    "seed": 0,
    "checks": [
        {"check": "closed_loop_index", "center": [0.0, 0.0, 0.0], "radius": 0.5, "expected_k": 0},
        {
            "check": "isotopy",
            "level": 0.5,
            "box": [[-1.5, 1.5], [-1.5, 1.5], [-1.5, 1.5]],
            "resolution": 20,
        },
    ],
}

BUILTIN_SCENARIOS["linear-repeller-2d"] = {
    "schema_version": 1,
    "name": "linear-repeller-2d",
    "description": "x' = +x in the plane: a single repeller also has index (-1)^2 = +1",
    "field": {"source": "x1, x2", "n": 2, "m": 0},
    "seed": 0,
    "checks": [
        {"check": "topological_index", "center": [0.0, 0.0], "radius": 0.5, "expected": 1}
    ],
}

BUILTIN_SCENARIOS["linear-saddle-2d"] = {
    "schema_version": 1,
    "name": "linear-saddle-2d",
    "description": "planar saddle (-x1, x2): index (-1)^(n-k) with one unstable direction",
    "field": {"source": "-x1, x2", "n": 2, "m": 0},
    "seed": 0,
    "checks": [
        {"check": "topological_index", "center": [0.0, 0.0], "radius": 0.5, "expected": -1}
    ],
}

BUILTIN_SCENARIOS["linear-saddle-3d"] = {
    "schema_version": 1,
    "name": "linear-saddle-3d",
    "description": "3-d saddle (-x1, -x2, x3) with one unstable direction: index (-1)^(3-1) = +1",
    "field": {"source": "-x1, -x2, x3", "n": 3, "m": 0},
    "seed": 0,
    "checks": [
        {"check": "topological_index", "center": [0.0, 0.0, 0.0], "radius": 0.5, "expected": 1}
    ],
}

BUILTIN_SCENARIOS["double-well"] = {
    "schema_version": 1,
    "name": "double-well",
    "description": "cubic (x1 - x1^3, -x2): two attractors and a one-saddle balance "
    "a boundary degree of +1",
    "field": {"source": "x1 - x1^3, -x2", "n": 2, "m": 0},
    "seed": 0,
    "checks": [
        {
            "check": "poincare_hopf",
            "region": [[-2.5, 2.5], [-2.5, 2.5]],
            "boundary": [
                {"type": "sphere", "center": [0.0, 0.0], "radius": 2.0, "refinement": 4}
            ],
        }
    ],
}

BUILTIN_SCENARIOS["flat-torus"] = {
    "schema_version": 1,
    "name": "flat-torus",
    "description": "periodic field (sin x1, sin x2) on the flat torus: index sum 0",
    "field": {"source": "sin(x1), sin(x2)", "n": 2, "m": 0},
    "seed": 0,
    "checks": [
        {"check": "flat_torus_index", "box": [[0.0, TWO_PI], [0.0, TWO_PI]]}
    ],
}

BUILTIN_SCENARIOS["van-der-pol"] = {
    "schema_version": 1,
    "name": "van-der-pol",
    "description": "van der Pol oscillator: hemisphere test on the cycle, zero net "
    "boundary degree on an annulus, trivial Gauss class on a tube",
    "field": {"source": "x2, (1 - x1^2)*x2 - x1", "n": 2, "m": 0},
    "seed": 0,
    "checks": [
        {"check": "limit_cycle_hemisphere", "seed_point": [2.0, 0.0], "normal_grid": 64},
        {
            "check": "poincare_hopf",
            "region": [[-4.0, 4.0], [-4.0, 4.0]],
            "boundary": [
                {"type": "sphere", "center": [0.0, 0.0], "radius": 0.5, "refinement": 4},
                {"type": "sphere", "center": [0.0, 0.0], "radius": 4.0, "refinement": 5},
            ],
        },
        {
            "check": "cycle_tube_class",
            "seed_point": [2.0, 0.0],
            "tube_radius": 0.2,
            "field3d": "x2, (1 - x1^2)*x2 - x1, -x3",
            "expected": 0,
        },
    ],
}

BUILTIN_SCENARIOS["circle-normal-form"] = {
    "schema_version": 1,
    "name": "circle-normal-form",
    "description": "r' = r(1 - r^2) with unit rotation: the Gauss image of the "
    "cycle is the full tangent circle",
    "field": {
        "source": "x1*(1 - x1^2 - x2^2) - x2, x2*(1 - x1^2 - x2^2) + x1",
        "n": 2,
        "m": 0,
    },
    "seed": 0,
    "checks": [
        {"check": "limit_cycle_hemisphere", "seed_point": [0.2, 0.0], "normal_grid": 64}
    ],
}

BUILTIN_SCENARIOS["brockett-integrator"] = {
    "schema_version": 1,
    "name": "brockett-integrator",
    "description": "nonholonomic integrator (u1, u2, x1 u2 - x2 u1): surjectivity "
    "fails in the +-e3 directions",
    "field": {"source": "u1, u2, x1*u2 - x2*u1", "n": 3, "m": 2},
    "seed": 0,
    "checks": [{"check": "brockett_surjectivity"}],
}

BUILTIN_SCENARIOS["full-actuation"] = {
    "schema_version": 1,
    "name": "full-actuation",
    "description": "x' = u: every direction is reachable",
    "field": {"source": "u1, u2", "n": 2, "m": 2},
    "seed": 0,
    "checks": [{"check": "brockett_surjectivity"}],
}

BUILTIN_SCENARIOS["rotating-attractor"] = {
    "schema_version": 1,
    "name": "rotating-attractor",
    "description": "spiral sink (-x1 + x2, -x2 - x1) with V = |x|^2/2: dynamics and "
    "descent Gauss maps share degree (+1)",
    "field": {"source": "-x1 + x2, -x2 - x1", "n": 2, "m": 0},
    "lyapunov": {"source": "(x1^2 + x2^2)/2"},
    "seed": 0,
    "checks": [
        {
            "check": "isotopy",
            "level": 0.5,
            "box": [[-2.0, 2.0], [-2.0, 2.0]],
            "resolution": 48,
        }
    ],
}

BUILTIN_SCENARIOS["gradient-torus"] = {
    "schema_version": 1,
    "name": "gradient-torus",
    "description": "torus-shaped Lyapunov level of (sqrt(x1^2+x2^2)-1)^2 + x3^2: "
    "the descent Gauss map covers every direction at least twice",
    "field": {"source": "-x1, -x2, -x3", "n": 3, "m": 0},
    "lyapunov": {"source": "(sqrt(x1^2 + x2^2) - 1)^2 + x3^2"},
    "seed": 0,
    "checks": [
        {
            "check": "preimage_count",
            "level": 0.04,
            "box": [[-1.6, 1.6], [-1.6, 1.6], [-0.6, 0.6]],
            "resolution": 24,
            "direction_grid": 128,
        }
    ],
}

BUILTIN_SCENARIOS["sphere-torus-homology"] = {
    "schema_version": 1,
    "name": "sphere-torus-homology",
    "description": "Betti numbers of the icosphere (1,0,1) and a tube torus (1,2,1)",
    "field": {"source": "-x1, -x2, -x3", "n": 3, "m": 0},
    "seed": 0,
    "checks": [
        {
            "check": "homology",
            "mesh": {"type": "sphere", "center": [0.0, 0.0, 0.0], "radius": 1.0, "refinement": 2},
            "expected_betti": [1, 0, 1],
            "expected_torsion": [[], [], []],
        },
        {
            "check": "homology",
            "mesh": {"type": "tube-torus", "radius": 0.3, "samples": 24, "resolution": 12},
            "expected_betti": [1, 2, 1],
            "expected_torsion": [[], [], []],
        },
        {
            "check": "homology",
            "mesh": {"type": "klein-bottle"},
            "expected_betti": [1, 1, 0],
            "expected_torsion": [[], [2], []],
        },
    ],
}
