"""Closed oriented sphere meshes of any dimension.

Orientation convention: a top simplex (v0..v_{n-1}) of a sphere around c is
positively oriented when det[v0-c, ..., v_{n-1}-c] > 0, i.e. the outward
boundary orientation of the enclosed ball.
"""

from __future__ import annotations

import numpy as np

from .errors import MeshError
from .mesh import SimplicialMesh, refine_mesh


def _outward_signs(verts: np.ndarray, simplices: np.ndarray, center: np.ndarray) -> np.ndarray:
    mats = verts[simplices] - center  # (T, n, n), rows are v_i - c
    dets = np.linalg.det(np.transpose(mats, (0, 2, 1)))
    if np.any(np.abs(dets) < 1e-14):
        raise MeshError("degenerate simplex while orienting sphere mesh")
    return np.where(dets > 0, 1, -1).astype(np.int64)


def _project(verts: np.ndarray, center: np.ndarray, radius: float) -> np.ndarray:
    rel = verts - center
    norms = np.linalg.norm(rel, axis=1, keepdims=True)
    return center + radius * rel / norms


def build_sphere_mesh(n: int, center, radius: float, refinement: int = 0) -> SimplicialMesh:
    """Closed oriented (n-1)-sphere mesh.

    n=2: regular polygon with 8 * 2**refinement segments.
    n=3: icosphere, `refinement` subdivision rounds.
    n=4: boundary of the cross-polytope, `refinement` rounds of tetrahedral
         edge-midpoint subdivision.
    n>=5: cross-polytope boundary, refinement 0 only.
    """
    if n < 2:
        raise ValueError("sphere meshes need ambient dimension n >= 2")
    if refinement < 0:
        raise ValueError("refinement must be >= 0")
    if radius <= 0:
        raise ValueError("radius must be positive")
    center = np.asarray(center, dtype=float)
    if center.shape != (n,):
        raise ValueError(f"center must have length {n}")

    if n == 2:
        k = 8 * 2**refinement
        angles = 2.0 * np.pi * np.arange(k) / k
        verts = center + radius * np.column_stack([np.cos(angles), np.sin(angles)])
        simplices = np.column_stack([np.arange(k), (np.arange(k) + 1) % k])
        return SimplicialMesh(verts, simplices, _outward_signs(verts, simplices, center))

    if n == 3:
        mesh = _icosahedron()
    else:
        mesh = _cross_polytope(n)
        if n >= 5 and refinement > 0:
            raise MeshError("sphere refinement not supported for n >= 5")

    for _ in range(refinement):
        mesh, _ = refine_mesh(mesh)
        mesh = SimplicialMesh(_project(mesh.vertices, np.zeros(n), 1.0), mesh.simplices, mesh.signs)

    verts = center + radius * mesh.vertices
    return SimplicialMesh(verts, mesh.simplices, _outward_signs(verts, mesh.simplices, center))


def _icosahedron() -> SimplicialMesh:
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    verts = np.array(
        [
            (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
            (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
            (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
        ],
        dtype=float,
    )
    verts /= np.linalg.norm(verts[0])
    faces = np.array(
        [
            (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
            (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
            (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
            (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
        ]
    )
    return SimplicialMesh(verts, faces, _outward_signs(verts, faces, np.zeros(3)))


def _cross_polytope(n: int) -> SimplicialMesh:
    verts = np.vstack([np.eye(n), -np.eye(n)])  # +e_i then -e_i
    simplices = []
    for bits in range(2**n):
        simplex = [i + n * ((bits >> i) & 1) for i in range(n)]
        simplices.append(simplex)
    simplices = np.array(simplices)
    return SimplicialMesh(verts, simplices, _outward_signs(verts, simplices, np.zeros(n)))
