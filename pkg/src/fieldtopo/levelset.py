"""Level-set meshes {V = c} by marching triangles (2-d) / marching
tetrahedra over a Kuhn cube decomposition (3-d), with linear interpolation
and one Newton projection step.

Output meshes are oriented outward with respect to the sublevel set
{V < c}: in 2-d the polygon runs counterclockwise around it, in 3-d
triangle normals align with +grad(V).
"""

from __future__ import annotations

from itertools import permutations

import numpy as np

from .errors import MeshError, RegularityError
from .fieldlang import FieldSpec, ScalarSpec, field_function_vectorized, gradient
from .mesh import SimplicialMesh

_GRAD_MIN = 1e-8


def extract_level_set(V: ScalarSpec, level: float, box, resolution: int) -> SimplicialMesh:
    """Mesh of {V = level} intersected with an axis-aligned box."""
    n = V.n
    if n not in (2, 3):
        raise ValueError("level-set extraction supports n = 2 or 3")
    if resolution < 8:
        raise ValueError("resolution must be >= 8")
    box = np.asarray(box, dtype=float)
    if box.shape != (n, 2):
        raise ValueError(f"box must be {n} (lo, hi) pairs")

    axes = [np.linspace(box[i, 0], box[i, 1], resolution + 1) for i in range(n)]
    grids = np.meshgrid(*axes, indexing="ij")
    points = np.stack([g.ravel() for g in grids])  # (n, P)
    scalar = field_function_vectorized(FieldSpec(n, 0, (V.expr,)))
    grad_field = gradient(V)
    grad_fun = field_function_vectorized(grad_field)

    values = scalar(points)[:, 0] - level
    near = np.abs(values) <= 1e-9 * (1.0 + abs(level))
    if np.any(near):
        with np.errstate(all="ignore"):
            grad_norms = np.linalg.norm(grad_fun(points[:, near]), axis=1)
        grad_norms = np.where(np.isfinite(grad_norms), grad_norms, 0.0)
        if np.any(grad_norms < _GRAD_MIN):
            idx = np.nonzero(near)[0][int(np.argmin(grad_norms))]
            raise RegularityError(
                f"level set is not regular near grid point {points[:, idx].tolist()}"
            )
    # nudge exact zeros so every grid value carries a strict sign
    scale = max(np.max(np.abs(values)), 1.0)
    values = np.where(values == 0.0, 1e-12 * scale, values)

    shape = tuple(resolution + 1 for _ in range(n))

    def gid(multi):
        return np.ravel_multi_index(multi, shape)

    if n == 2:
        cells = _marching_triangles(resolution, gid)
    else:
        cells = _marching_tetrahedra(resolution, gid)

    positive = values > 0
    vert_index: dict[tuple[int, int], int] = {}
    verts: list[np.ndarray] = []

    def edge_vertex(a: int, b: int) -> int:
        key = (a, b) if a < b else (b, a)
        idx = vert_index.get(key)
        if idx is None:
            va, vb = values[key[0]], values[key[1]]
            t = va / (va - vb)
            p = points[:, key[0]] + t * (points[:, key[1]] - points[:, key[0]])
            idx = len(verts)
            verts.append(p)
            vert_index[key] = idx
        return idx

    simplices: list[tuple[int, ...]] = []
    sims = cells  # (C, n+1) global grid ids
    pos = positive[sims]
    n_pos = pos.sum(axis=1)
    mixed = np.nonzero((n_pos > 0) & (n_pos < n + 1))[0]

    for c in mixed:
        corner_ids = sims[c]
        corner_pos = pos[c]
        inside = [int(v) for v, p in zip(corner_ids, corner_pos) if not p]
        outside = [int(v) for v, p in zip(corner_ids, corner_pos) if p]
        if n == 2:
            # one segment across the triangle
            lone, others = (inside, outside) if len(inside) == 1 else (outside, inside)
            a = edge_vertex(lone[0], others[0])
            b = edge_vertex(lone[0], others[1])
            simplices.append((a, b))
        else:
            if len(inside) == 1 or len(outside) == 1:
                lone = inside[0] if len(inside) == 1 else outside[0]
                others = outside if len(inside) == 1 else inside
                tri = tuple(edge_vertex(lone, o) for o in others)
                simplices.append(tri)
            else:
                (a, b), (c2, d) = inside, outside
                pac, pad = edge_vertex(a, c2), edge_vertex(a, d)
                pbc, pbd = edge_vertex(b, c2), edge_vertex(b, d)
                simplices.append((pac, pad, pbd))
                simplices.append((pac, pbd, pbc))

    if not verts:
        raise MeshError("level set does not intersect the box")

    vert_arr = np.array(verts)
    with np.errstate(all="ignore"):
        grads = grad_fun(vert_arr.T)
    norms2 = np.einsum("ij,ij->i", grads, grads)
    norms2 = np.where(np.isfinite(norms2), norms2, 0.0)
    if np.any(np.sqrt(norms2) < _GRAD_MIN):
        idx = int(np.argmin(norms2))
        raise RegularityError(
            f"level set is not regular near {vert_arr[idx].tolist()}"
        )
    # one Newton projection step along the gradient
    residuals = scalar(vert_arr.T)[:, 0] - level
    vert_arr = vert_arr - (residuals / norms2)[:, None] * grads

    simp_arr = np.array(simplices, dtype=np.int64)
    signs = _orient_against_gradient(vert_arr, simp_arr, grad_fun, n)
    return SimplicialMesh(vert_arr, simp_arr, signs)


def _orient_against_gradient(verts, simplices, grad_fun, n):
    """Reorder simplex vertices so the stored order is outward for {V < c}."""
    centroids = verts[simplices].mean(axis=1)
    grads = grad_fun(centroids.T)
    if n == 2:
        tangents = verts[simplices[:, 1]] - verts[simplices[:, 0]]
        flip = grads[:, 0] * tangents[:, 1] - grads[:, 1] * tangents[:, 0] < 0
    else:
        e1 = verts[simplices[:, 1]] - verts[simplices[:, 0]]
        e2 = verts[simplices[:, 2]] - verts[simplices[:, 0]]
        normals = np.cross(e1, e2)
        flip = np.einsum("ij,ij->i", normals, grads) < 0
    simplices[flip] = simplices[flip][:, ::-1]
    return np.ones(len(simplices), dtype=np.int64)


def _marching_triangles(res: int, gid) -> np.ndarray:
    i, j = np.meshgrid(np.arange(res), np.arange(res), indexing="ij")
    i, j = i.ravel(), j.ravel()
    c00, c10 = gid((i, j)), gid((i + 1, j))
    c01, c11 = gid((i, j + 1)), gid((i + 1, j + 1))
    tri1 = np.column_stack([c00, c10, c11])
    tri2 = np.column_stack([c00, c11, c01])
    return np.vstack([tri1, tri2])


def _marching_tetrahedra(res: int, gid) -> np.ndarray:
    i, j, k = np.meshgrid(*(np.arange(res),) * 3, indexing="ij")
    base = np.stack([i.ravel(), j.ravel(), k.ravel()])  # (3, C)
    tets = []
    for perm in permutations(range(3)):
        corners = [base]
        cur = base
        for axis in perm:
            cur = cur + np.eye(3, dtype=np.int64)[:, [axis]]
            corners.append(cur)
        tets.append(np.column_stack([gid(tuple(c)) for c in corners]))
    return np.vstack(tets)
