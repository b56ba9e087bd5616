"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -s` to see the lines as they go.
"""

import functools
import json
import math

import numpy as np
import pytest

from fieldtopo.conditions import (
    ControlNeighborhood,
    brockett_surjectivity_check,
    classify_homotopy_class,
    closed_loop_index_check,
    hemisphere_test,
    isotopy_check,
    locate_limit_cycle,
    poincare_hopf_check,
    preimage_count_check,
)
from fieldtopo.degree import DegreeConfig, degree, topological_index
from fieldtopo.errors import LyapunovHypothesisError
from fieldtopo.fieldlang import (
    evaluate_field,
    jacobian,
    parse_feedback,
    parse_field,
    parse_scalar,
)
from fieldtopo.homology import (
    chain_complex_of,
    euler_characteristic,
    homology_groups,
    smith_normal_form,
)
from fieldtopo.levelset import extract_level_set
from fieldtopo.mesh import builtin_klein_bottle, refine_mesh
from fieldtopo.scenarios import BUILTIN_SCENARIOS
from fieldtopo.spheres import build_sphere_mesh
from fieldtopo.tubes import tubular_neighborhood_mesh

Z_FIELDS = {
    1: "x1, x2",
    2: "x1^2 - x2^2, 2*x1*x2",
    3: "x1^3 - 3*x1*x2^2, 3*x1^2*x2 - x2^3",
    4: "x1^4 - 6*x1^2*x2^2 + x2^4, 4*x1^3*x2 - 4*x1*x2^3",
}


def criterion(number, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[criterion {number:2d}] FAIL  {title}")
                raise
            print(f"[criterion {number:2d}] PASS  {title}")

        return run

    return wrap


def minus_field(n):
    return parse_field(", ".join(f"-x{i + 1}" for i in range(n)), n)


@criterion(1, "topological_index(-x, 0) = (-1)^n for n = 1..4")
def test_criterion_1_linear_attractor_index():
    for n in (1, 2, 3, 4):
        result = topological_index(minus_field(n), [0.0] * n, 0.5)
        assert result.degree == (-1) ** n, f"n={n}"
        assert result.residual < 0.25


@criterion(2, "z^k degrees k = 1..4 and conjugates -k, against 4096-sample winding")
def test_criterion_2_z_power_degrees():
    def winding_oracle(f):
        angles = 2 * math.pi * np.arange(4097) / 4096
        total, prev = 0.0, None
        for a in angles:
            v = evaluate_field(f, [math.cos(a), math.sin(a)])
            phase = math.atan2(v[1], v[0])
            if prev is not None:
                d = phase - prev
                d -= 2 * math.pi * round(d / (2 * math.pi))
                total += d
            prev = phase
        return round(total / (2 * math.pi))

    mesh = build_sphere_mesh(2, [0, 0], 1.0, 4)
    for k, source in Z_FIELDS.items():
        f = parse_field(source, 2)
        assert degree(f, mesh).degree == k == winding_oracle(f)
        re_src, im_src = source.split(", ")
        conj = parse_field(f"{re_src}, 0 - ({im_src})", 2)
        assert degree(conj, mesh).degree == -k == winding_oracle(conj)


@criterion(3, "Poincare-Hopf on the double well: boundary degree 1 = (+1)+(-1)+(+1)")
def test_criterion_3_double_well_balance():
    f = parse_field("x1 - x1^3, -x2", 2)
    circle = build_sphere_mesh(2, [0, 0], 2.0, 4)
    rep = poincare_hopf_check(f, [circle], [[-2.5, 2.5], [-2.5, 2.5]])
    assert rep.verdict == "pass"
    assert rep.expected == 1 and rep.observed == 1
    indices = sorted(
        int(e["values"][-1]) for e in rep.evidence if e["label"] == "equilibrium"
    )
    assert indices == [-1, 1, 1]


@criterion(4, "van der Pol: annulus net boundary degree 0; tubular torus class 0")
def test_criterion_4_vdp_cycle_neighborhoods(vdp_field, vdp_cycle):
    inner = build_sphere_mesh(2, [0, 0], 0.5, 4)
    outer = build_sphere_mesh(2, [0, 0], 4.0, 5)
    rep = poincare_hopf_check(vdp_field, [inner, outer], [[-4, 4], [-4, 4]])
    assert rep.verdict == "pass"
    assert rep.expected == 0 and rep.observed == 0

    pts = vdp_cycle.points[::8]
    pts3 = np.column_stack([pts, np.zeros(len(pts))])
    pts3 = np.vstack([pts3, pts3[:1]])
    tube = tubular_neighborhood_mesh(pts3, 0.2, 12)
    field3d = parse_field("x2, (1 - x1^2)*x2 - x1, -x3", 3)
    rep = classify_homotopy_class(tube, field3d, expected=0)
    assert rep.verdict == "pass" and rep.observed == 0


@criterion(5, "homology: icosphere (1,0,1); torus (1,2,1), chi 0; Klein H1 = Z + Z/2")
def test_criterion_5_homology():
    ico = build_sphere_mesh(3, [0, 0, 0], 1.0, 2)
    groups = homology_groups(chain_complex_of(ico))
    assert [g.betti for g in groups] == [1, 0, 1]

    theta = np.linspace(0, 2 * np.pi, 25)
    curve = np.column_stack([np.cos(theta), np.sin(theta), 0 * theta])
    torus = tubular_neighborhood_mesh(curve, 0.3, 12)
    groups = homology_groups(chain_complex_of(torus))
    assert [g.betti for g in groups] == [1, 2, 1]
    assert all(g.torsion == () for g in groups)
    assert euler_characteristic(torus) == 0

    klein = builtin_klein_bottle()
    groups = homology_groups(chain_complex_of(klein))
    assert groups[1].betti == 1 and groups[1].torsion == (2,)
    assert groups[2].betti == 0


@criterion(6, "Brockett: integrator violated at +-(0,0,1) with residual >= 0.95 eps; x'=u passes")
def test_criterion_6_brockett():
    nbhd = ControlNeighborhood(grid_size=32)
    integrator = parse_field("u1, u2, x1*u2 - x2*u1", 3, m=2)
    rep = brockett_surjectivity_check(integrator, nbhd, seed=0)
    assert rep.verdict == "violated"
    violated = {
        tuple(np.round(e["values"][:3], 9)): e["values"][3]
        for e in rep.evidence
        if e["label"] == "violated_direction"
    }
    for pole in ((0.0, 0.0, 1.0), (-0.0, -0.0, -1.0)):
        assert pole in violated
        assert violated[pole] >= 0.95 * nbhd.epsilon

    full = parse_field("u1, u2", 2, m=2)
    rep = brockett_surjectivity_check(full, ControlNeighborhood(grid_size=32), seed=0)
    assert rep.verdict == "pass"


@criterion(7, "closed-loop index: (-1)^n for n = 2,3 with u = 0; saddle (-1)^(n-k), k=1")
def test_criterion_7_closed_loop_index():
    for n in (2, 3):
        src = ", ".join(f"-x{i + 1} + u{i + 1}" for i in range(n))
        f = parse_field(src, n, m=n)
        fb = parse_feedback(", ".join(["0"] * n), n, n)
        rep = closed_loop_index_check(f, fb, [0.0] * n, 0.5, expected_k=0)
        assert rep.verdict == "pass" and rep.observed == (-1) ** n

    saddle = parse_field("-x1 + u1, x2", 2, m=1)
    rep = closed_loop_index_check(
        saddle, parse_feedback("0", 2, 1), [0, 0], 0.5, expected_k=1
    )
    assert rep.verdict == "pass" and rep.observed == -1


@criterion(8, "isotopy: rotating attractor (n=2) and -x (n=3) pass; pure rotation violates hypothesis")
def test_criterion_8_isotopy():
    V2 = parse_scalar("(x1^2 + x2^2)/2", 2)
    rot = parse_field("-x1 + x2, -x2 - x1", 2)
    mesh2 = extract_level_set(V2, 0.5, [[-2, 2], [-2, 2]], 48)
    rep = isotopy_check(rot, V2, mesh2, t_grid=32)
    assert rep.verdict == "pass" and rep.observed == rep.expected == 1

    V3 = parse_scalar("(x1^2 + x2^2 + x3^2)/2", 3)
    mesh3 = extract_level_set(V3, 0.5, [[-1.5, 1.5]] * 3, 20)
    rep = isotopy_check(minus_field(3), V3, mesh3, t_grid=32)
    assert rep.verdict == "pass" and rep.observed == rep.expected == -1

    with pytest.raises(LyapunovHypothesisError):
        isotopy_check(parse_field("x2, -x1", 2), V2, mesh2)


@criterion(9, "hemisphere: normal form 64 normals x 2 crossings; vdp covered, even when generic")
def test_criterion_9_hemisphere(vdp_field, vdp_cycle):
    nf = parse_field("x1*(1 - x1^2 - x2^2) - x2, x2*(1 - x1^2 - x2^2) + x1", 2)
    cycle = locate_limit_cycle(nf, [0.2, 0.0])
    rep = hemisphere_test(nf, cycle, normal_grid=64)
    assert rep.verdict == "pass"
    counts = [e["values"][-2] for e in rep.evidence if e["label"] == "normal"]
    assert len(counts) == 64 and all(c == 2 for c in counts)

    rep = hemisphere_test(vdp_field, vdp_cycle, normal_grid=64)
    assert rep.verdict == "pass"
    for e in rep.evidence:
        if e["label"] != "normal":
            continue
        *_, crossings, generic = e["values"]
        assert crossings >= 1 or generic == 0.0
        if generic == 1.0:
            assert crossings % 2 == 0


@criterion(10, "preimage multiplicity >= 2 on the analytic torus, stable under refinement")
def test_criterion_10_preimage_count(torus_level_mesh):
    V, mesh = torus_level_mesh
    rep = preimage_count_check(V, mesh, direction_grid=128, seed=0)
    assert rep.verdict == "pass" and rep.observed >= 2

    fine, _ = refine_mesh(mesh)
    rep2 = preimage_count_check(V, fine, direction_grid=128, seed=0)
    assert rep2.verdict == "pass" and rep2.observed == rep.observed == 2


@criterion(11, "property suites: refinement/rescaling invariance, dd=0, SNF fuzz, FD Jacobians")
def test_criterion_11_property_suites(rng):
    # degree is refinement-invariant on the acceptance fields
    for n, expected in ((2, 1), (3, -1), (4, 1)):
        base_ref = {2: 3, 3: 1, 4: 0}[n]
        for extra in (0, 1):
            mesh = build_sphere_mesh(n, [0.0] * n, 1.0, base_ref + extra)
            assert degree(minus_field(n), mesh).degree == expected
    z3 = parse_field(Z_FIELDS[3], 2)
    assert all(
        degree(z3, build_sphere_mesh(2, [0, 0], 1.0, r)).degree == 3 for r in (3, 4, 5)
    )

    # positive rescaling never changes a verdict
    scale = "(1 + 0.5*sin(x1))"
    scaled = parse_field(
        ", ".join(f"{scale}*({c})" for c in Z_FIELDS[2].split(", ")), 2
    )
    mesh = build_sphere_mesh(2, [0, 0], 1.0, 4)
    assert degree(scaled, mesh).degree == 2
    assert topological_index(scaled, [0, 0], 0.5).degree == 2

    # dd = 0 on every mesh the acceptance touches
    for m in (
        build_sphere_mesh(2, [0, 0], 1.0, 3),
        build_sphere_mesh(3, [0, 0, 0], 1.0, 1),
        build_sphere_mesh(4, [0, 0, 0, 0], 1.0, 0),
        builtin_klein_bottle(),
    ):
        cx = chain_complex_of(m)
        for k in range(2, cx.dim + 1):
            assert (cx.boundary(k - 1) @ cx.boundary(k)).count_nonzero() == 0

    # SNF invariant under 100 random unimodular transformations
    base = np.array([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
    reference = smith_normal_form(base)
    for _ in range(100):
        M = base.astype(object).copy()
        for _ in range(6):
            op = rng.integers(0, 4)
            k = int(rng.integers(-3, 4))
            i, j = rng.choice(3, size=2, replace=False)
            if op == 0:
                M[i] = M[i] + k * M[j]
            elif op == 1:
                M[:, i] = M[:, i] + k * M[:, j]
            elif op == 2:
                M[[i, j]] = M[[j, i]]
            else:
                M[:, [i, j]] = M[:, [j, i]]
        assert smith_normal_form(M) == reference

    # symbolic vs central-difference Jacobians on every built-in field
    step = 1e-5
    for sc in BUILTIN_SCENARIOS.values():
        spec = sc["field"]
        f = parse_field(spec["source"], spec["n"], spec.get("m", 0))
        for _ in range(100):
            x = rng.uniform(-1.0, 1.0, f.n)
            if "sqrt" in spec["source"] and np.linalg.norm(x[:2]) < 0.05:
                continue
            u = rng.uniform(-1.0, 1.0, f.m) if f.m else None
            J = jacobian(f, x, u)
            J_fd = np.empty_like(J)
            for j in range(f.n):
                hi, lo = x.copy(), x.copy()
                hi[j] += step
                lo[j] -= step
                J_fd[:, j] = (
                    evaluate_field(f, hi, u) - evaluate_field(f, lo, u)
                ) / (2 * step)
            assert np.abs(J - J_fd).max() <= 1e-4 * max(1.0, np.abs(J).max())
