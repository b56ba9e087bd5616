"""Torus meshes around closed curves in 3-space.

Frames are rotation-minimizing (parallel transport of the first normal with
the closure holonomy distributed evenly), so inflection points of the spine
are harmless.
"""

from __future__ import annotations

import numpy as np

from .errors import TubeRadiusError
from .mesh import SimplicialMesh


def tubular_neighborhood_mesh(curve, radius: float, resolution: int = 12) -> SimplicialMesh:
    """Closed oriented torus mesh of tube radius `radius` around a closed
    polygonal curve in R^3, with `resolution` vertices per cross-section."""
    pts = np.asarray(curve, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError("curve must be a list of 3-vectors")
    if np.linalg.norm(pts[0] - pts[-1]) <= 1e-9:
        pts = pts[:-1]
    else:
        raise ValueError("curve must be closed: first and last samples must agree")
    K = len(pts)
    if K < 8:
        raise ValueError("need at least 8 distinct curve samples")
    if resolution < 3:
        raise ValueError("cross-section resolution must be >= 3")
    if radius <= 0:
        raise ValueError("radius must be positive")

    _check_clearance(pts, radius)

    tangents = np.roll(pts, -1, axis=0) - np.roll(pts, 1, axis=0)
    tangents /= np.linalg.norm(tangents, axis=1, keepdims=True)

    # parallel-transport an initial normal along the spine
    seed = np.array([1.0, 0.0, 0.0])
    if abs(seed @ tangents[0]) > 0.9:
        seed = np.array([0.0, 1.0, 0.0])
    normal = seed - (seed @ tangents[0]) * tangents[0]
    normal /= np.linalg.norm(normal)
    normals = [normal]
    for i in range(1, K):
        n_prev = normals[-1]
        t = tangents[i]
        n_new = n_prev - (n_prev @ t) * t
        n_new /= np.linalg.norm(n_new)
        normals.append(n_new)
    # holonomy after one loop, distributed so ring K matches ring 0
    t0 = tangents[0]
    n_back = normals[-1] - (normals[-1] @ t0) * t0  # last normal carried to ring 0
    n_back /= np.linalg.norm(n_back)
    b0 = np.cross(t0, normals[0])
    theta = np.arctan2(n_back @ b0, n_back @ normals[0])
    normals = np.array(normals)
    binormals = np.cross(tangents, normals)
    corr = -theta * np.arange(K) / K
    normals = np.cos(corr)[:, None] * normals + np.sin(corr)[:, None] * binormals
    binormals = np.cross(tangents, normals)

    angles = 2.0 * np.pi * np.arange(resolution) / resolution
    verts = np.empty((K * resolution, 3))
    for i in range(K):
        ring = (
            pts[i]
            + radius * np.outer(np.cos(angles), normals[i])
            + radius * np.outer(np.sin(angles), binormals[i])
        )
        verts[i * resolution : (i + 1) * resolution] = ring

    def vid(i: int, j: int) -> int:
        return (i % K) * resolution + (j % resolution)

    simplices = []
    for i in range(K):
        for j in range(resolution):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i + 1, j + 1), vid(i, j + 1)
            simplices.append((a, b, c))
            simplices.append((a, c, d))
    simplices = np.array(simplices, dtype=np.int64)

    # outward = away from the spine
    p, q, r = (verts[simplices[:, k]] for k in range(3))
    centroids = (p + q + r) / 3.0
    spine = np.repeat(pts, 2 * resolution, axis=0)
    outward = centroids - spine
    normals_tri = np.cross(q - p, r - p)
    signs = np.where(np.einsum("ij,ij->i", normals_tri, outward) > 0, 1, -1)
    return SimplicialMesh(verts, simplices, signs.astype(np.int64))


def _check_clearance(pts: np.ndarray, radius: float) -> None:
    K = len(pts)
    window = max(2, K // 8)
    diffs = pts[:, None, :] - pts[None, :, :]
    dists = np.linalg.norm(diffs, axis=2)
    idx = np.arange(K)
    circ = np.abs(idx[:, None] - idx[None, :])
    circ = np.minimum(circ, K - circ)
    far = circ > window
    if not np.any(far):
        raise ValueError("curve has too few samples for a clearance estimate")
    gap = float(dists[far].min())
    if radius > 0.5 * gap:
        raise TubeRadiusError(
            f"tube radius {radius} exceeds half the minimum clearance {gap:.6g}"
        )
