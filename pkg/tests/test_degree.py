import math

import numpy as np
import pytest

from fieldtopo.degree import (
    DegreeConfig,
    degree,
    find_equilibria,
    gauss_map,
    hyperbolic_index,
    mod2_degree,
    topological_index,
)
from fieldtopo.errors import (
    DegreeUndecidedError,
    IsolationError,
    NonHyperbolicError,
    VanishingFieldError,
)
from fieldtopo.fieldlang import parse_field
from fieldtopo.mesh import builtin_klein_bottle, centroid_split
from fieldtopo.spheres import build_sphere_mesh

Z_FIELDS = {
    1: "x1, x2",
    2: "x1^2 - x2^2, 2*x1*x2",
    3: "x1^3 - 3*x1*x2^2, 3*x1^2*x2 - x2^3",
    4: "x1^4 - 6*x1^2*x2^2 + x2^4, 4*x1^3*x2 - 4*x1*x2^3",
}


def winding_oracle(f, samples=4096, radius=1.0):
    """Direct winding-angle accumulation on a dense circle; independent of
    the mesh-based degree computation."""
    angles = 2 * np.pi * np.arange(samples + 1) / samples
    total = 0.0
    prev = None
    from fieldtopo.fieldlang import evaluate_field

    for a in angles:
        v = evaluate_field(f, [radius * math.cos(a), radius * math.sin(a)])
        phase = math.atan2(v[1], v[0])
        if prev is not None:
            d = phase - prev
            while d > math.pi:
                d -= 2 * math.pi
            while d < -math.pi:
                d += 2 * math.pi
            total += d
        prev = phase
    return round(total / (2 * math.pi))


def minus_field(n):
    return parse_field(", ".join(f"-x{i + 1}" for i in range(n)), n)


class TestGaussMap:
    def test_linear_attractor_direction(self):
        f = minus_field(2)
        assert np.allclose(gauss_map(f, [2.0, 0.0]), [-1.0, 0.0])

    def test_vanishing_field_raises(self):
        with pytest.raises(VanishingFieldError):
            gauss_map(minus_field(2), [0.0, 0.0])

    def test_z2_hand_value(self):
        f = parse_field(Z_FIELDS[2], 2)
        assert np.allclose(gauss_map(f, [0.0, 1.0]), [-1.0, 0.0])

    def test_unit_norm(self, rng):
        f = parse_field("x1 + 2*x2, sin(x1) - 3", 2)
        for _ in range(20):
            g = gauss_map(f, rng.uniform(-2, 2, 2))
            assert abs(np.linalg.norm(g) - 1.0) < 1e-12


class TestDegree:
    def test_outward_radial_circle(self):
        mesh = build_sphere_mesh(2, [0, 0], 1.0, 3)
        result = degree(parse_field("x1, x2", 2), mesh)
        assert result.degree == 1 and result.method == "winding"
        assert result.residual < 1e-9

    def test_attractor_icosphere(self):
        mesh = build_sphere_mesh(3, [0, 0, 0], 1.0, 2)
        result = degree(minus_field(3), mesh)
        assert result.degree == -1 and result.method == "solid-angle"

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_z_power_matches_winding_oracle(self, k):
        f = parse_field(Z_FIELDS[k], 2)
        mesh = build_sphere_mesh(2, [0, 0], 1.0, 3)
        assert degree(f, mesh).degree == k == winding_oracle(f)

    def test_regular_value_method_n4(self):
        mesh = build_sphere_mesh(4, [0, 0, 0, 0], 1.0, 0)
        result = degree(minus_field(4), mesh)
        assert result.degree == 1 and result.method == "regular-value"
        assert result.regular_value is not None
        assert abs(np.linalg.norm(result.regular_value) - 1.0) < 1e-9

    def test_refinement_invariance(self):
        f = parse_field(Z_FIELDS[3], 2)
        for r in (3, 4, 5):
            mesh = build_sphere_mesh(2, [0, 0], 1.0, r)
            assert degree(f, mesh).degree == 3

    def test_vanishing_on_vertex_raises(self):
        # (x2, -x1) rotated field vanishes nowhere; shift center onto a zero
        f = parse_field("x1 - 1, x2", 2)
        mesh = build_sphere_mesh(2, [0, 0], 1.0, 3)  # vertex exactly at (1, 0)
        with pytest.raises(VanishingFieldError):
            degree(f, mesh)

    def test_homotopy_invariance_along_nonvanishing_path(self):
        # straight-line homotopy between two attracting fields
        f0 = minus_field(2)
        f1 = parse_field("-x1 + x2, -x2 - x1", 2)
        mesh = build_sphere_mesh(2, [0, 0], 1.0, 4)
        from fieldtopo.fieldlang import field_function_vectorized

        v0 = field_function_vectorized(f0)(mesh.vertices.T)
        v1 = field_function_vectorized(f1)(mesh.vertices.T)
        for t in np.linspace(0, 1, 32):
            interp = (1 - t) * v0 + t * v1
            assert np.linalg.norm(interp, axis=1).min() > 1e-9
        assert degree(f0, mesh).degree == degree(f1, mesh).degree == 1

    def test_budget_exhaustion_raises(self):
        f = parse_field(Z_FIELDS[4], 2)
        mesh = build_sphere_mesh(2, [0, 0], 1.0, 0)  # 8 segments, image steps huge
        with pytest.raises(DegreeUndecidedError):
            degree(f, mesh, DegreeConfig(max_passes=0))


class TestMod2Degree:
    def test_constant_map_on_klein_bottle(self):
        mesh = builtin_klein_bottle()
        samples = np.tile([1.0, 0.0, 0.0], (mesh.n_vertices, 1))
        assert mod2_degree(samples, mesh) == 0

    def test_once_covering_on_klein_bottle(self):
        # collapse everything outside one triangle: its centroid goes to the
        # north pole, its corners to a spread equator, the rest to the south
        # pole, covering the sphere exactly once
        kb = builtin_klein_bottle()
        split = centroid_split(kb, 0)
        a, b, c = kb.simplices[0]
        samples = np.tile([0.0, 0.0, -1.0], (split.n_vertices, 1))
        samples[split.n_vertices - 1] = (0.0, 0.0, 1.0)
        for k, v in enumerate((a, b, c)):
            ang = 2 * np.pi * k / 3
            samples[v] = (np.cos(ang), np.sin(ang), 0.0)
        assert mod2_degree(samples, split) == 1

    @pytest.mark.parametrize("n,field,expected", [
        (2, "x1, x2", 1),
        (2, Z_FIELDS[2], 0),
        (3, "-x1, -x2, -x3", 1),
    ])
    def test_parity_matches_degree_on_orientable(self, n, field, expected):
        f = parse_field(field, n)
        mesh = build_sphere_mesh(n, [0.0] * n, 1.0, 3 if n == 2 else 1)
        assert mod2_degree(f, mesh) == degree(f, mesh).degree % 2 == expected


class TestFindEquilibria:
    def test_single_attractor(self):
        eqs = find_equilibria(minus_field(2), [[-1, 1], [-1, 1]], grid=5)
        assert len(eqs) == 1
        assert np.linalg.norm(eqs[0].location) < 1e-9
        assert eqs[0].index == 1 and eqs[0].hyperbolic
        assert eqs[0].n_stable == 2 and eqs[0].n_unstable == 0

    def test_double_well(self):
        f = parse_field("x1 - x1^3, -x2", 2)
        eqs = find_equilibria(f, [[-2, 2], [-2, 2]], grid=5)
        locations = sorted(round(e.location[0]) for e in eqs)
        assert locations == [-1, 0, 1]
        by_x = {round(e.location[0]): e.index for e in eqs}
        assert by_x[-1] == 1 and by_x[1] == 1 and by_x[0] == -1

    def test_constant_field_no_roots(self):
        f = parse_field("1", 1)
        assert find_equilibria(f, [[-1, 1]], grid=5) == []

    def test_degenerate_fold_gets_degree_fallback(self):
        f = parse_field("x1^2, -x2", 2)
        eqs = find_equilibria(f, [[-1, 1], [-1, 1]], grid=5)
        assert len(eqs) == 1
        assert not eqs[0].hyperbolic
        assert eqs[0].index == 0

    def test_deduplication(self):
        eqs = find_equilibria(minus_field(2), [[-1, 1], [-1, 1]], grid=9)
        assert len(eqs) == 1


class TestTopologicalIndex:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_linear_attractor(self, n):
        result = topological_index(minus_field(n), [0.0] * n, 0.5)
        assert result.degree == (-1) ** n

    def test_z3_degenerate_equilibrium(self):
        f = parse_field(Z_FIELDS[3], 2)
        assert topological_index(f, [0.0, 0.0], 0.5).degree == 3

    def test_saddle_matches_jacobian_sign(self):
        f = parse_field("-x1, x2", 2)
        assert topological_index(f, [0.0, 0.0], 0.5).degree == -1
        assert hyperbolic_index(np.diag([-1.0, 1.0])) == -1

    def test_radius_independence(self):
        f = parse_field(Z_FIELDS[2], 2)
        assert (
            topological_index(f, [0.0, 0.0], 0.8).degree
            == topological_index(f, [0.0, 0.0], 0.4).degree
        )

    def test_second_equilibrium_detected(self):
        f = parse_field("x1 - x1^3, -x2", 2)
        with pytest.raises(IsolationError):
            topological_index(f, [0.0, 0.0], 0.6)  # (+-1, 0) sit inside 2r


class TestHyperbolicIndex:
    def test_attractor(self):
        assert hyperbolic_index(-np.eye(2)) == 1

    def test_repeller_even_dimension(self):
        assert hyperbolic_index(np.eye(2)) == 1

    def test_saddle(self):
        assert hyperbolic_index(np.diag([-1.0, 1.0])) == -1

    def test_non_hyperbolic_raises(self):
        with pytest.raises(NonHyperbolicError):
            hyperbolic_index(np.array([[0.0, 1.0], [-1.0, 0.0]]))
        with pytest.raises(NonHyperbolicError):
            hyperbolic_index(np.diag([1e-9, 1.0]))

    @pytest.mark.parametrize("n", [2, 3])
    def test_agrees_with_small_sphere_degree(self, n, rng):
        # 25 random hyperbolic linear fields per dimension, conditioned so the
        # Gauss image resolves without deep refinement
        count = 0
        while count < 25:
            A = rng.normal(size=(n, n))
            eig = np.linalg.eigvals(A)
            if np.min(np.abs(eig.real)) < 0.05 or np.linalg.cond(A) > 8.0:
                continue
            count += 1
            terms = [
                " + ".join(f"{float(A[i, j])!r}*x{j + 1}" for j in range(n))
                for i in range(n)
            ]
            f = parse_field(", ".join(terms), n)
            assert topological_index(f, [0.0] * n, 0.5).degree == hyperbolic_index(A)
