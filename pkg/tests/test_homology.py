from itertools import combinations
from math import gcd

import numpy as np
import pytest

from fieldtopo.homology import (
    betti_numbers,
    chain_complex_of,
    euler_characteristic,
    homology_groups,
    smith_normal_form,
)
from fieldtopo.mesh import (
    SimplicialMesh,
    builtin_klein_bottle,
    builtin_projective_plane,
    refine_mesh,
)
from fieldtopo.spheres import build_sphere_mesh
from fieldtopo.tubes import tubular_neighborhood_mesh


def snf_minor_gcd_oracle(M):
    """Invariant factors via gcds of k-by-k minors (exact, independent)."""
    M = np.asarray(M, dtype=object)
    rows, cols = M.shape

    def minor_gcd(k):
        g = 0
        for r in combinations(range(rows), k):
            for c in combinations(range(cols), k):
                sub = [[int(M[i][j]) for j in c] for i in r]
                g = gcd(g, _int_det(sub))
        return abs(g)

    factors = []
    prev = 1
    for k in range(1, min(rows, cols) + 1):
        g = minor_gcd(k)
        if g == 0:
            break
        factors.append(g // prev)
        prev = g
    return tuple(factors)


def _int_det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        sub = [row[:j] + row[j + 1 :] for row in m[1:]]
        total += (-1) ** j * m[0][j] * _int_det(sub)
    return total


def tube_torus(samples=24, resolution=12):
    theta = np.linspace(0, 2 * np.pi, samples + 1)
    curve = np.column_stack([np.cos(theta), np.sin(theta), 0 * theta])
    return tubular_neighborhood_mesh(curve, 0.3, resolution)


class TestSmithNormalForm:
    def test_single_entry(self):
        assert smith_normal_form(np.array([[2]])) == ((2,), 1)

    def test_rank_deficient(self):
        assert smith_normal_form(np.array([[1, 0], [0, 0]])) == ((1,), 1)

    def test_hand_reduction(self):
        # d1 = gcd of entries = 2, d1*d2 = |det| = 8
        assert smith_normal_form(np.array([[2, 4], [6, 8]])) == ((2, 4), 2)

    def test_zero_matrix(self):
        assert smith_normal_form(np.zeros((3, 4), dtype=int)) == ((), 0)

    def test_divisibility_chain(self, rng):
        for _ in range(50):
            M = rng.integers(-6, 7, size=(4, 4))
            factors, rank = smith_normal_form(M)
            assert rank == len(factors)
            for a, b in zip(factors, factors[1:]):
                assert b % a == 0

    def test_against_minor_gcd_oracle(self, rng):
        for _ in range(40):
            shape = rng.integers(1, 4, size=2)
            M = rng.integers(-5, 6, size=tuple(shape))
            assert smith_normal_form(M)[0] == snf_minor_gcd_oracle(M)

    def test_unimodular_fuzz_invariance(self, rng):
        # invariant factors are untouched by unimodular row/column operations
        base = np.array([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
        reference = smith_normal_form(base)
        for _ in range(100):
            M = base.astype(object).copy()
            for _ in range(8):
                op = rng.integers(0, 6)
                k = int(rng.integers(-3, 4))
                i, j = rng.choice(3, size=2, replace=False)
                if op == 0:
                    M[i] = M[i] + k * M[j]
                elif op == 1:
                    M[:, i] = M[:, i] + k * M[:, j]
                elif op == 2:
                    M[[i, j]] = M[[j, i]]
                elif op == 3:
                    M[:, [i, j]] = M[:, [j, i]]
                elif op == 4:
                    M[i] = -M[i]
                else:
                    M[:, i] = -M[:, i]
            assert smith_normal_form(M) == reference

    def test_rejects_non_integer(self):
        with pytest.raises(ValueError):
            smith_normal_form(np.array([[0.5]]))

    def test_large_entries_no_overflow(self):
        big = 10**30
        factors, rank = smith_normal_form(np.array([[big, 0], [0, 3 * big]], dtype=object))
        assert factors == (big, 3 * big) and rank == 2


class TestChainComplex:
    def test_single_triangle(self):
        mesh = SimplicialMesh(
            np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
            np.array([[0, 1, 2]]),
            np.array([1]),
        )
        cx = chain_complex_of(mesh)
        assert cx.boundary(2).shape == (3, 1)
        assert cx.boundary(1).shape == (3, 3)
        assert (cx.boundary(1) @ cx.boundary(2)).count_nonzero() == 0

    def test_circle_boundary_columns_sum_zero(self):
        mesh = build_sphere_mesh(2, [0.0, 0.0], 1.0, 3)
        cx = chain_complex_of(mesh)
        d1 = cx.boundary(1).toarray()
        assert d1.shape == (64, 64)
        assert np.all(d1.sum(axis=0) == 0)

    def test_dd_zero_on_all_test_meshes(self):
        meshes = [
            build_sphere_mesh(3, [0.0] * 3, 1.0, 1),
            build_sphere_mesh(4, [0.0] * 4, 1.0, 0),
            tube_torus(),
            builtin_klein_bottle(),
            builtin_projective_plane(),
        ]
        for mesh in meshes:
            cx = chain_complex_of(mesh)
            for k in range(2, cx.dim + 1):
                assert (cx.boundary(k - 1) @ cx.boundary(k)).count_nonzero() == 0

    def test_torus_rank_consistency_with_real_rank(self):
        # SNF ranks must agree with floating-point matrix rank (independent)
        mesh = tube_torus()
        cx = chain_complex_of(mesh)
        for k in (1, 2):
            dense = cx.boundary(k).toarray().astype(float)
            assert smith_normal_form(cx.boundary(k))[1] == np.linalg.matrix_rank(dense)


class TestHomologyGroups:
    def test_icosphere(self):
        mesh = build_sphere_mesh(3, [0.0] * 3, 1.0, 2)
        groups = homology_groups(chain_complex_of(mesh))
        assert [g.betti for g in groups] == [1, 0, 1]
        assert all(g.torsion == () for g in groups)

    def test_tube_torus(self):
        groups = homology_groups(chain_complex_of(tube_torus()))
        assert [g.betti for g in groups] == [1, 2, 1]
        assert all(g.torsion == () for g in groups)

    def test_klein_bottle(self):
        groups = homology_groups(chain_complex_of(builtin_klein_bottle()))
        assert [g.betti for g in groups] == [1, 1, 0]
        assert [g.torsion for g in groups] == [(), (2,), ()]

    def test_projective_plane(self):
        groups = homology_groups(chain_complex_of(builtin_projective_plane()))
        assert [g.betti for g in groups] == [1, 0, 0]
        assert [g.torsion for g in groups] == [(), (2,), ()]

    def test_three_sphere(self):
        mesh = build_sphere_mesh(4, [0.0] * 4, 1.0, 1)
        groups = homology_groups(chain_complex_of(mesh))
        assert [g.betti for g in groups] == [1, 0, 0, 1]

    def test_b0_counts_path_components(self):
        a = build_sphere_mesh(2, [0.0, 0.0], 1.0, 1)
        b = build_sphere_mesh(2, [5.0, 5.0], 1.0, 1)
        both = SimplicialMesh(
            np.vstack([a.vertices, b.vertices]),
            np.vstack([a.simplices, b.simplices + a.n_vertices]),
            np.concatenate([a.signs, b.signs]),
        )
        groups = homology_groups(chain_complex_of(both))
        assert groups[0].betti == 2

    def test_invariant_under_refinement(self):
        for mesh in (build_sphere_mesh(3, [0.0] * 3, 1.0, 1), tube_torus(16, 8),
                     builtin_klein_bottle()):
            fine, _ = refine_mesh(mesh)
            coarse_groups = homology_groups(chain_complex_of(mesh))
            fine_groups = homology_groups(chain_complex_of(fine))
            assert coarse_groups == fine_groups


class TestEulerCharacteristic:
    def test_values(self):
        assert euler_characteristic(build_sphere_mesh(2, [0, 0], 1.0, 3)) == 0
        assert euler_characteristic(build_sphere_mesh(3, [0, 0, 0], 1.0, 2)) == 2
        assert euler_characteristic(tube_torus()) == 0
        assert euler_characteristic(builtin_klein_bottle()) == 0
        assert euler_characteristic(builtin_projective_plane()) == 1

    def test_matches_betti_alternating_sum(self):
        for mesh in (
            build_sphere_mesh(2, [0, 0], 1.0, 2),
            build_sphere_mesh(3, [0, 0, 0], 1.0, 1),
            build_sphere_mesh(4, [0, 0, 0, 0], 1.0, 0),
            tube_torus(),
            builtin_klein_bottle(),
            builtin_projective_plane(),
        ):
            betti = betti_numbers(mesh)
            alt = sum((-1) ** k * b for k, b in enumerate(betti))
            assert euler_characteristic(mesh) == alt
