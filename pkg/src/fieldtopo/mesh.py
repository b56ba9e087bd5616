"""Oriented simplicial meshes embedded in n-space.

A mesh stores vertex coordinates, top-dimensional simplices as vertex index
tuples, and a per-simplex orientation sign (+1 keeps the stored vertex order,
-1 flips it).  Meshes are immutable once built and safe to share across
workers.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import MeshError, NonManifoldError


@dataclass(frozen=True)
class SimplicialMesh:
    vertices: np.ndarray  # (V, ambient_dim) float
    simplices: np.ndarray  # (T, dim+1) int
    signs: np.ndarray  # (T,) int, +1 or -1

    def __post_init__(self):
        object.__setattr__(self, "vertices", np.asarray(self.vertices, dtype=float))
        object.__setattr__(self, "simplices", np.asarray(self.simplices, dtype=np.int64))
        object.__setattr__(self, "signs", np.asarray(self.signs, dtype=np.int64))
        if self.simplices.ndim != 2:
            raise MeshError("simplices must be a 2-d index array")
        if self.signs.shape != (self.simplices.shape[0],):
            raise MeshError("one orientation sign per top simplex required")

    @property
    def ambient_dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def dim(self) -> int:
        return self.simplices.shape[1] - 1

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_simplices(self) -> int:
        return self.simplices.shape[0]


@dataclass(frozen=True)
class OrientationReport:
    orientable: bool
    signs: np.ndarray | None = None  # consistent per-simplex signs when orientable
    odd_cycle: tuple[int, ...] | None = None  # witness simplex cycle otherwise


def k_faces(mesh: SimplicialMesh, k: int) -> np.ndarray:
    """All k-faces of the mesh as sorted vertex index rows, deduplicated."""
    if k < 0 or k > mesh.dim:
        raise ValueError(f"face dimension {k} out of range")
    cols = mesh.simplices.shape[1]
    blocks = [
        np.sort(mesh.simplices[:, list(sel)], axis=1)
        for sel in combinations(range(cols), k + 1)
    ]
    faces = np.vstack(blocks)
    return np.unique(faces, axis=0)


def simplex_counts(mesh: SimplicialMesh) -> list[int]:
    return [k_faces(mesh, k).shape[0] for k in range(mesh.dim + 1)]


def _facet_incidence(mesh: SimplicialMesh) -> dict[tuple, list[tuple[int, int]]]:
    """Map facet (sorted vertex tuple) -> [(simplex index, dropped position)]."""
    incidence: dict[tuple, list[tuple[int, int]]] = defaultdict(list)
    for t, simplex in enumerate(mesh.simplices):
        for drop in range(len(simplex)):
            facet = tuple(sorted(np.delete(simplex, drop)))
            incidence[facet].append((t, drop))
    return incidence


def facet_degrees(mesh: SimplicialMesh) -> list[int]:
    return [len(v) for v in _facet_incidence(mesh).values()]


def is_closed(mesh: SimplicialMesh) -> bool:
    return all(d == 2 for d in facet_degrees(mesh))


def validate_mesh(mesh: SimplicialMesh, require_closed: bool = False) -> None:
    """Manifold condition: every facet is shared by at most 2 top simplices."""
    degrees = facet_degrees(mesh)
    if any(d > 2 for d in degrees):
        raise NonManifoldError("a facet is shared by more than two top simplices")
    if require_closed and any(d != 2 for d in degrees):
        raise MeshError("mesh is not closed: some facet belongs to only one simplex")


def _perm_parity(seq) -> int:
    """+1 for even, -1 for odd permutation of its sorted order."""
    seq = list(seq)
    parity = 1
    for i in range(len(seq)):
        j = min(range(i, len(seq)), key=lambda t: seq[t])
        if j != i:
            seq[i], seq[j] = seq[j], seq[i]
            parity = -parity
    return parity


def _induced_sign(simplex, drop: int) -> int:
    """Sign of the induced orientation on the facet opposite position `drop`,
    relative to the facet's sorted vertex order."""
    facet = [v for i, v in enumerate(simplex) if i != drop]
    return (-1) ** drop * _perm_parity(facet)


def orient_mesh(mesh: SimplicialMesh) -> OrientationReport:
    """Propagate orientation over the facet-adjacency graph.

    Returns consistent signs (seeded by the stored sign of simplex 0) or a
    witness cycle of simplex indices whose orientation constraint is odd.
    """
    incidence = _facet_incidence(mesh)
    if any(len(v) > 2 for v in incidence.values()):
        raise NonManifoldError("a facet is shared by more than two top simplices")

    n = mesh.n_simplices
    assigned = np.zeros(n, dtype=np.int64)
    parent = {}
    for start in range(n):
        if assigned[start]:
            continue
        assigned[start] = mesh.signs[start] if mesh.signs[start] != 0 else 1
        stack = [start]
        while stack:
            t = stack.pop()
            simplex = mesh.simplices[t]
            for drop in range(len(simplex)):
                facet = tuple(sorted(np.delete(simplex, drop)))
                for t2, drop2 in incidence[facet]:
                    if t2 == t:
                        continue
                    # adjacent simplices must induce opposite facet orientations
                    s_here = _induced_sign(mesh.simplices[t], drop) * assigned[t]
                    needed = -s_here * _induced_sign(mesh.simplices[t2], drop2)
                    if assigned[t2] == 0:
                        assigned[t2] = needed
                        parent[t2] = t
                        stack.append(t2)
                    elif assigned[t2] != needed:
                        cycle = _witness_cycle(parent, t, t2)
                        return OrientationReport(False, None, cycle)
    return OrientationReport(True, assigned, None)


def _witness_cycle(parent, a: int, b: int) -> tuple[int, ...]:
    path_a, path_b = [a], [b]
    seen = {a}
    while path_a[-1] in parent:
        path_a.append(parent[path_a[-1]])
        seen.add(path_a[-1])
    while path_b[-1] not in seen and path_b[-1] in parent:
        path_b.append(parent[path_b[-1]])
    join = path_b[-1]
    trimmed_a = path_a[: path_a.index(join) + 1] if join in path_a else path_a
    return tuple(trimmed_a + path_b[:-1][::-1])


# ---------------------------------------------------------------------------
# Uniform refinement

# Children of a tetrahedron split at its 6 edge midpoints, with orientation
# factors relative to the parent, for each interior diagonal choice.  Labels:
# 0..3 corners, (i,j) the midpoint of edge ij.
_TET_CORNERS = [
    (0, (0, 1), (0, 2), (0, 3)),
    ((0, 1), 1, (1, 2), (1, 3)),
    ((0, 2), (1, 2), 2, (2, 3)),
    ((0, 3), (1, 3), (2, 3), 3),
]
_TET_OCTA = {
    ((0, 1), (2, 3)): [
        ((0, 1), (2, 3), (0, 2), (0, 3)),
        ((0, 1), (2, 3), (0, 3), (1, 3)),
        ((0, 1), (2, 3), (1, 3), (1, 2)),
        ((0, 1), (2, 3), (1, 2), (0, 2)),
    ],
    ((0, 2), (1, 3)): [
        ((0, 2), (1, 3), (0, 1), (0, 3)),
        ((0, 2), (1, 3), (0, 3), (2, 3)),
        ((0, 2), (1, 3), (2, 3), (1, 2)),
        ((0, 2), (1, 3), (1, 2), (0, 1)),
    ],
    ((0, 3), (1, 2)): [
        ((0, 3), (1, 2), (0, 1), (1, 3)),
        ((0, 3), (1, 2), (1, 3), (2, 3)),
        ((0, 3), (1, 2), (2, 3), (0, 2)),
        ((0, 3), (1, 2), (0, 2), (0, 1)),
    ],
}


def _reference_point(label):
    ref = np.eye(4)[:, 1:]  # corners of the reference tet in R^3
    if isinstance(label, tuple):
        return 0.5 * (ref[label[0]] + ref[label[1]])
    return ref[label]


def _octa_children(diagonal):
    """Orientation-corrected octahedron tets for one diagonal choice."""
    children = []
    for child in _TET_OCTA[diagonal]:
        pts = np.array([_reference_point(v) for v in child])
        det = np.linalg.det(pts[1:] - pts[0])
        if det < 0:
            child = (child[0], child[1], child[3], child[2])
        children.append(child)
    return children


_OCTA_CHILDREN = {d: _octa_children(d) for d in _TET_OCTA}


def refine_mesh(mesh: SimplicialMesh) -> tuple[SimplicialMesh, np.ndarray]:
    """Uniform edge-midpoint refinement (dim 1, 2, or 3).

    Returns the refined mesh plus a (V', 2) parent array: each new vertex is
    the midpoint of the two listed old vertices (original vertices repeat
    their own index).  Conforming across neighbors by construction.
    """
    dim = mesh.dim
    if dim not in (1, 2, 3):
        raise MeshError(f"uniform refinement unsupported for dim {dim}")

    verts = [row for row in mesh.vertices]
    parents = [(i, i) for i in range(mesh.n_vertices)]
    midpoint_index: dict[tuple[int, int], int] = {}

    def midpoint(a: int, b: int) -> int:
        key = (a, b) if a < b else (b, a)
        idx = midpoint_index.get(key)
        if idx is None:
            idx = len(verts)
            verts.append(0.5 * (mesh.vertices[a] + mesh.vertices[b]))
            parents.append(key)
            midpoint_index[key] = idx
        return idx

    new_simplices = []
    new_signs = []

    def emit(vertices_tuple, sign):
        new_simplices.append(vertices_tuple)
        new_signs.append(sign)

    for t, simplex in enumerate(mesh.simplices):
        s = int(mesh.signs[t])
        if dim == 1:
            a, b = simplex
            m = midpoint(a, b)
            emit((a, m), s)
            emit((m, b), s)
        elif dim == 2:
            a, b, c = simplex
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            emit((a, ab, ca), s)
            emit((ab, b, bc), s)
            emit((ca, bc, c), s)
            emit((ab, bc, ca), s)
        else:
            ids = {i: int(v) for i, v in enumerate(simplex)}
            mids = {}
            for i, j in combinations(range(4), 2):
                mids[(i, j)] = midpoint(ids[i], ids[j])

            def resolve(label):
                return ids[label] if isinstance(label, int) else mids[label]

            for child in _TET_CORNERS:
                emit(tuple(resolve(v) for v in child), s)
            # shortest interior diagonal keeps children well shaped
            def diag_len(d):
                p = verts[mids[d[0]]] - verts[mids[d[1]]]
                return float(p @ p)

            diagonal = min(_TET_OCTA, key=diag_len)
            for child in _OCTA_CHILDREN[diagonal]:
                emit(tuple(resolve(v) for v in child), s)

    return (
        SimplicialMesh(np.array(verts), np.array(new_simplices), np.array(new_signs)),
        np.array(parents, dtype=np.int64),
    )


def centroid_split(mesh: SimplicialMesh, t_index: int) -> SimplicialMesh:
    """Split one triangle into three at its centroid (dim 2 only)."""
    if mesh.dim != 2:
        raise MeshError("centroid split implemented for triangle meshes only")
    a, b, c = (int(v) for v in mesh.simplices[t_index])
    centroid = mesh.vertices[[a, b, c]].mean(axis=0)
    verts = np.vstack([mesh.vertices, centroid])
    g = mesh.n_vertices
    s = int(mesh.signs[t_index])
    keep = [i for i in range(mesh.n_simplices) if i != t_index]
    simplices = np.vstack([mesh.simplices[keep], [[a, b, g], [b, c, g], [c, a, g]]])
    signs = np.concatenate([mesh.signs[keep], [s, s, s]])
    return SimplicialMesh(verts, simplices, signs)


# ---------------------------------------------------------------------------
# Text export / import
#
# Format: header line, then "ambient", "dim", a vertex table (one decimal
# coordinate row per vertex), then a simplex table ("sign i0 i1 ..." rows).

_HEADER = "fieldtopo-mesh 1"


def export_mesh(mesh: SimplicialMesh) -> str:
    lines = [_HEADER, f"ambient {mesh.ambient_dim}", f"dim {mesh.dim}"]
    lines.append(f"vertices {mesh.n_vertices}")
    for row in mesh.vertices:
        lines.append(" ".join(repr(float(v)) for v in row))
    lines.append(f"simplices {mesh.n_simplices}")
    for sign, simplex in zip(mesh.signs, mesh.simplices):
        lines.append(" ".join([str(int(sign))] + [str(int(v)) for v in simplex]))
    return "\n".join(lines) + "\n"


def import_mesh(text: str) -> SimplicialMesh:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != _HEADER:
        raise MeshError("not a fieldtopo mesh file")
    ambient = int(lines[1].split()[1])
    dim = int(lines[2].split()[1])
    n_verts = int(lines[3].split()[1])
    verts = [
        [float(v) for v in lines[4 + i].split()] for i in range(n_verts)
    ]
    at = 4 + n_verts
    n_simp = int(lines[at].split()[1])
    simplices, signs = [], []
    for i in range(n_simp):
        parts = lines[at + 1 + i].split()
        signs.append(int(parts[0]))
        simplices.append([int(v) for v in parts[1:]])
    mesh = SimplicialMesh(np.array(verts), np.array(simplices), np.array(signs))
    if mesh.ambient_dim != ambient or mesh.dim != dim:
        raise MeshError("mesh header does not match table shapes")
    return mesh


# ---------------------------------------------------------------------------
# Built-in closed surfaces that cannot be extracted from implicit equations
# in 3-space.


def builtin_klein_bottle(nu: int = 8, nv: int = 8) -> SimplicialMesh:
    """Klein bottle triangulation on an nu-by-nv grid, embedded in R^4.

    The u direction wraps with a flip in v; the v direction wraps directly.
    """
    if nu < 4 or nv < 4:
        raise ValueError("grid must be at least 4 x 4")

    def vid(i: int, j: int) -> int:
        if i == nu:  # wrap with flip
            i, j = 0, (-j) % nv
        return i * nv + (j % nv)

    verts = np.zeros((nu * nv, 4))
    R, r = 2.0, 0.7
    for i in range(nu):
        for j in range(nv):
            u = 2.0 * np.pi * i / nu
            v = 2.0 * np.pi * j / nv
            verts[i * nv + j] = (
                (R + r * np.cos(v)) * np.cos(u),
                (R + r * np.cos(v)) * np.sin(u),
                r * np.sin(v) * np.cos(u / 2.0),
                r * np.sin(v) * np.sin(u / 2.0),
            )
    simplices = []
    for i in range(nu):
        for j in range(nv):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i + 1, j + 1), vid(i, j + 1)
            simplices.append((a, b, c))
            simplices.append((a, c, d))
    signs = np.ones(len(simplices), dtype=np.int64)
    return SimplicialMesh(verts, np.array(simplices), signs)


def builtin_projective_plane() -> SimplicialMesh:
    """Minimal 6-vertex projective plane: icosahedron mod the antipodal map.

    Coordinates use the quadratic (Veronese-style) embedding in R^4, which is
    invariant under v -> -v.
    """
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    ico = np.array(
        [
            (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
            (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
            (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
        ],
        dtype=float,
    )
    ico /= np.linalg.norm(ico[0])
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    antipode = {}
    for i, v in enumerate(ico):
        for j, w in enumerate(ico):
            if np.allclose(v, -w, atol=1e-9):
                antipode[i] = j
    reps = sorted({min(i, antipode[i]) for i in range(12)})
    rep_index = {v: k for k, v in enumerate(reps)}

    def quotient(i: int) -> int:
        return rep_index[min(i, antipode[i])]

    seen = set()
    q_faces = []
    for f in faces:
        qf = tuple(quotient(v) for v in f)
        key = frozenset(qf)
        if key in seen:
            continue
        seen.add(key)
        q_faces.append(qf)
    verts = np.zeros((len(reps), 4))
    for v, k in rep_index.items():
        x, y, z = ico[v]
        verts[k] = (x * x - y * y, x * y, x * z, y * z)
    signs = np.ones(len(q_faces), dtype=np.int64)
    return SimplicialMesh(verts, np.array(q_faces), signs)
