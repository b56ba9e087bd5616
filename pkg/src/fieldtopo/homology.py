"""Integral simplicial homology: boundary matrices, Smith normal form,
Betti numbers, torsion coefficients, Euler characteristic.

The Smith normal form works on a sparse dictionary representation with
Python integers throughout, so coefficient growth can never overflow.
Pivots are chosen with minimal absolute value, ties broken by a Markowitz
fill estimate, which keeps boundary-matrix reductions near-linear.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np
import scipy.sparse as sp

from .errors import MeshError
from .mesh import SimplicialMesh, k_faces, simplex_counts


@dataclass(frozen=True)
class ChainComplex:
    """Boundary matrices boundaries[k]: C_k -> C_{k-1} (k = 1..dim)."""

    counts: tuple[int, ...]  # simplices per dimension 0..dim
    boundaries: tuple[sp.csc_matrix, ...]

    @property
    def dim(self) -> int:
        return len(self.counts) - 1

    def boundary(self, k: int) -> sp.csc_matrix:
        """Boundary map from k-chains; zero-shaped outside 1..dim."""
        if 1 <= k <= self.dim:
            return self.boundaries[k - 1]
        rows = self.counts[k - 1] if 0 <= k - 1 <= self.dim else 0
        cols = self.counts[k] if 0 <= k <= self.dim else 0
        return sp.csc_matrix((rows, cols), dtype=np.int64)


@dataclass(frozen=True)
class HomologyGroup:
    betti: int
    torsion: tuple[int, ...]  # invariant factors > 1, each dividing the next


def chain_complex_of(mesh: SimplicialMesh) -> ChainComplex:
    """Chain complex with standard alternating-sign incidence; checks dd=0."""
    faces_by_dim = [k_faces(mesh, k) for k in range(mesh.dim + 1)]
    index_by_dim = [
        {tuple(row): i for i, row in enumerate(faces)} for faces in faces_by_dim
    ]
    boundaries = []
    for k in range(1, mesh.dim + 1):
        rows, cols, vals = [], [], []
        for col, simplex in enumerate(faces_by_dim[k]):
            for drop in range(k + 1):
                face = tuple(np.delete(simplex, drop))
                rows.append(index_by_dim[k - 1][face])
                cols.append(col)
                vals.append((-1) ** drop)
        mat = sp.csc_matrix(
            (vals, (rows, cols)),
            shape=(len(faces_by_dim[k - 1]), len(faces_by_dim[k])),
            dtype=np.int64,
        )
        boundaries.append(mat)
    complex_ = ChainComplex(
        tuple(len(f) for f in faces_by_dim), tuple(boundaries)
    )
    for k in range(2, complex_.dim + 1):
        if (complex_.boundary(k - 1) @ complex_.boundary(k)).count_nonzero():
            raise MeshError(f"chain condition violated: d{k-1} d{k} != 0")
    return complex_


# ---------------------------------------------------------------------------
# Smith normal form


def _to_entries(M):
    if sp.issparse(M):
        coo = M.tocoo()
        items = zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist())
        shape = M.shape
    else:
        arr = np.asarray(M)
        if arr.ndim != 2:
            raise ValueError("matrix must be 2-dimensional")
        if arr.dtype == object:
            if any(v != int(v) for v in arr.flat):
                raise ValueError("matrix entries must be integers")
        elif arr.size and not np.all(arr == np.round(arr)):
            raise ValueError("matrix entries must be integers")
        nz = np.nonzero(arr)
        items = zip(nz[0].tolist(), nz[1].tolist(), arr[nz].tolist())
        shape = arr.shape
    return items, shape


def smith_normal_form(M) -> tuple[tuple[int, ...], int]:
    """Invariant factors d1 | d2 | ... | dr (positive) and the rank r."""
    items, _ = _to_entries(M)
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, dict[int, int]] = {}
    for r, c, v in items:
        v = int(round(v))
        if v:
            rows.setdefault(r, {})[c] = v
            cols.setdefault(c, {})[r] = v

    def set_entry(r, c, v):
        if v:
            rows.setdefault(r, {})[c] = v
            cols.setdefault(c, {})[r] = v
        else:
            if r in rows and c in rows[r]:
                del rows[r][c]
                if not rows[r]:
                    del rows[r]
            if c in cols and r in cols[c]:
                del cols[c][r]
                if not cols[c]:
                    del cols[c]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        for c, v in list(rows.get(src, {}).items()):
            set_entry(dst, c, rows.get(dst, {}).get(c, 0) + q * v)

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for r, v in list(cols.get(src, {}).items()):
            set_entry(r, dst, rows.get(r, {}).get(dst, 0) + q * v)

    def pick_pivot():
        best = None
        best_key = None
        for r, row in rows.items():
            for c, v in row.items():
                key = (abs(v), len(row) * len(cols[c]), r, c)
                if best_key is None or key < best_key:
                    best_key = key
                    best = (r, c)
                    if key[0] == 1 and key[1] <= 36:
                        return best
        return best

    factors: list[int] = []
    while rows:
        r, c = pick_pivot()
        while True:
            pivot = rows[r][c]
            # clear the pivot column with row operations
            done = True
            for r2 in list(cols[c].keys()):
                if r2 == r:
                    continue
                v = cols[c][r2]
                q = v // pivot
                add_row(r2, r, -q)
                if rows.get(r2, {}).get(c):
                    # remainder is smaller than the pivot: swap roles
                    r = r2
                    done = False
                    break
            if not done:
                continue
            pivot = rows[r][c]
            done = True
            for c2 in list(rows[r].keys()):
                if c2 == c:
                    continue
                v = rows[r][c2]
                q = v // pivot
                add_col(c2, c, -q)
                if rows.get(r, {}).get(c2):
                    c = c2
                    done = False
                    break
            if not done:
                continue
            if len(rows.get(r, {})) == 1 and len(cols.get(c, {})) == 1:
                break
        factors.append(abs(rows[r][c]))
        set_entry(r, c, 0)

    # enforce the divisibility chain d1 | d2 | ...
    changed = True
    while changed:
        changed = False
        for i in range(len(factors) - 1):
            a, b = factors[i], factors[i + 1]
            if b % a:
                g = gcd(a, b)
                factors[i], factors[i + 1] = g, a * b // g
                changed = True
    factors.sort()
    return tuple(factors), len(factors)


def homology_groups(complex_: ChainComplex) -> list[HomologyGroup]:
    """H_k for k = 0..dim: free rank plus torsion coefficients."""
    dim = complex_.dim
    snf = {}
    for k in range(1, dim + 1):
        snf[k] = smith_normal_form(complex_.boundary(k))
    ranks = {k: snf[k][1] for k in snf}
    ranks[0] = 0
    ranks[dim + 1] = 0
    groups = []
    for k in range(dim + 1):
        betti = complex_.counts[k] - ranks[k] - ranks[k + 1]
        torsion = tuple(d for d in snf.get(k + 1, ((), 0))[0] if d > 1)
        groups.append(HomologyGroup(betti, torsion))
    return groups


def betti_numbers(mesh: SimplicialMesh) -> tuple[int, ...]:
    return tuple(g.betti for g in homology_groups(chain_complex_of(mesh)))


def euler_characteristic(mesh: SimplicialMesh) -> int:
    """Alternating sum of simplex counts over all dimensions."""
    counts = simplex_counts(mesh)
    return int(sum((-1) ** k * c for k, c in enumerate(counts)))
