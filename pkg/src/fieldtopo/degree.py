"""Topological degree of Gauss maps on closed oriented meshes, equilibrium
location, and equilibrium indices.

Methods by mesh dimension: winding-angle accumulation (curves), signed
spherical-triangle areas (surfaces), signed preimage count of a seeded
regular value (dimension >= 3).  Whenever any simplex's spherical image is
wider than `max_arc` radians the whole mesh is refined uniformly, which
keeps neighbor contributions telescoping exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegreeUndecidedError,
    IsolationError,
    NonHyperbolicError,
    VanishingFieldError,
)
from .fieldlang import (
    FieldSpec,
    evaluate_field,
    field_function,
    field_function_vectorized,
    jacobian_function,
)
from .mesh import SimplicialMesh, refine_mesh, validate_mesh
from .spheres import build_sphere_mesh

_EIG_TOL = 1e-7  # hyperbolicity margin on eigenvalue real parts


@dataclass(frozen=True)
class DegreeConfig:
    seed: int = 0
    max_arc: float = 0.5  # radians; refine while any image simplex is wider
    snap_tol: float = 0.25
    max_passes: int = 10
    simplex_budget: int = 500_000
    boundary_margin: float = 1e-6  # regular-value rejection margin


@dataclass(frozen=True)
class DegreeResult:
    degree: int
    raw: float
    residual: float
    refinement_depth: int
    method: str  # winding | solid-angle | regular-value
    regular_value: tuple[float, ...] | None = None
    seed: int | None = None


@dataclass(frozen=True)
class Equilibrium:
    location: np.ndarray
    jacobian: np.ndarray
    hyperbolic: bool
    n_stable: int
    n_unstable: int
    n_center: int
    index: int


def gauss_map(f: FieldSpec, x) -> np.ndarray:
    """Normalized field direction X(x)/|X(x)|."""
    v = evaluate_field(f, x)
    norm = np.linalg.norm(v)
    if norm <= 1e-10:
        raise VanishingFieldError(f"field vanishes at {np.asarray(x).tolist()}")
    return v / norm


def _field_samples(f: FieldSpec, verts: np.ndarray) -> np.ndarray:
    vals = field_function_vectorized(f)(verts.T)
    norms = np.linalg.norm(vals, axis=1)
    if np.any(norms <= 1e-10):
        idx = int(np.argmin(norms))
        raise VanishingFieldError(
            f"field vanishes on mesh vertex {verts[idx].tolist()}"
        )
    return vals / norms[:, None]


def _normalize_samples(samples: np.ndarray) -> np.ndarray:
    samples = np.asarray(samples, dtype=float)
    norms = np.linalg.norm(samples, axis=1)
    if np.any(norms <= 1e-10):
        raise VanishingFieldError("map sample vanishes")
    return samples / norms[:, None]


def _image_arcs(samples: np.ndarray, simplices: np.ndarray) -> np.ndarray:
    """Max pairwise angle between the image vertices of each simplex."""
    pts = samples[simplices]  # (T, d+1, n)
    dots = np.einsum("tin,tjn->tij", pts, pts)
    worst = dots.min(axis=(1, 2))
    return np.arccos(np.clip(worst, -1.0, 1.0))


class _MapOnMesh:
    """A mesh together with unit-vector samples, refinable in lockstep.

    Samples are (V, dim+1) unit vectors: a map into S^dim.  For a FieldSpec
    the samples are the Gauss map at the vertices; explicit samples support
    maps that are not restrictions of an ambient field (e.g. on surfaces
    embedded in R^4)."""

    def __init__(self, mesh, f=None, samples=None):
        self.mesh = mesh
        self.f = f
        if f is not None:
            self.samples = _field_samples(f, mesh.vertices)
        else:
            if samples is None or len(samples) != mesh.n_vertices:
                raise ValueError("need one unit sample per mesh vertex")
            self.samples = _normalize_samples(samples)
        if self.samples.shape[1] != mesh.dim + 1:
            raise ValueError(
                f"map samples must land in S^{mesh.dim}: need {mesh.dim + 1} components"
            )

    def refine(self):
        mesh, parents = refine_mesh(self.mesh)
        if self.f is not None:
            samples = _field_samples(self.f, mesh.vertices)
        else:
            raw = self.samples[parents[:, 0]] + self.samples[parents[:, 1]]
            old = parents[:, 0] == parents[:, 1]
            raw[old] = self.samples[parents[old, 0]]
            samples = _normalize_samples(raw)
        self.mesh = mesh
        self.samples = samples


def _refine_until_fine(mm: _MapOnMesh, cfg: DegreeConfig) -> int:
    depth = 0
    while True:
        arcs = _image_arcs(mm.samples, mm.mesh.simplices)
        if arcs.size == 0 or arcs.max() <= cfg.max_arc:
            return depth
        if depth >= cfg.max_passes:
            raise DegreeUndecidedError(
                f"refinement budget exhausted; widest image arc {arcs.max():.3f} rad"
            )
        factor = {1: 2, 2: 4, 3: 8}[mm.mesh.dim]
        if mm.mesh.n_simplices * factor > cfg.simplex_budget:
            raise DegreeUndecidedError("simplex budget exhausted during refinement")
        mm.refine()
        depth += 1


def _winding_raw(samples, simplices, signs) -> float:
    a = samples[simplices[:, 0]]
    b = samples[simplices[:, 1]]
    cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
    dot = np.einsum("ij,ij->i", a, b)
    return float(np.sum(np.arctan2(cross, dot) * signs) / (2.0 * np.pi))


def _solid_angle_raw(samples, simplices, signs) -> float:
    a = samples[simplices[:, 0]]
    b = samples[simplices[:, 1]]
    c = samples[simplices[:, 2]]
    num = np.einsum("ij,ij->i", a, np.cross(b, c))
    den = (
        1.0
        + np.einsum("ij,ij->i", a, b)
        + np.einsum("ij,ij->i", b, c)
        + np.einsum("ij,ij->i", c, a)
    )
    omega = 2.0 * np.arctan2(num, den)
    return float(np.sum(omega * signs) / (4.0 * np.pi))


def _covering_counts(samples, simplices, signs, v):
    """Signed and unsigned counts of image simplices whose spherical span
    contains direction v; None when v is too close to an image boundary."""
    mats = np.transpose(samples[simplices], (0, 2, 1))  # columns are images
    dets = np.linalg.det(mats)
    margin = 1e-12
    singular = np.abs(dets) < margin
    if np.any(singular):
        # near-degenerate image simplices: reject v if it grazes their span
        for t in np.nonzero(singular)[0]:
            lam, res, *_ = np.linalg.lstsq(mats[t], v, rcond=None)
            if np.linalg.norm(mats[t] @ lam - v) < 1e-6:
                return None
    good = ~singular
    rhs = np.broadcast_to(v, (int(good.sum()), len(v)))[:, :, None]
    lam = np.linalg.solve(mats[good], rhs)[:, :, 0]
    scale = np.abs(lam).max(axis=1)
    rel = lam / scale[:, None]
    near_boundary = (np.abs(rel) < 1e-6).any(axis=1) & (rel > -1e-6).all(axis=1)
    if np.any(near_boundary):
        return None
    inside = (rel > 0).all(axis=1)
    sign_vals = np.sign(dets[good]).astype(int) * np.asarray(signs)[good]
    signed = int(np.sum(sign_vals[inside]))
    return signed, int(np.count_nonzero(inside))


def _regular_value_count(mm: _MapOnMesh, cfg: DegreeConfig, rng):
    n = mm.mesh.ambient_dim
    for _ in range(128):
        v = rng.normal(size=n)
        v /= np.linalg.norm(v)
        counts = _covering_counts(mm.samples, mm.mesh.simplices, mm.mesh.signs, v)
        if counts is not None:
            return counts[0], counts[1], v
    raise DegreeUndecidedError("could not find a regular value clear of all image boundaries")


def degree(f: FieldSpec, mesh: SimplicialMesh, config: DegreeConfig | None = None) -> DegreeResult:
    """Degree of the Gauss map of f restricted to a closed oriented mesh."""
    return _degree_of_map(_MapOnMesh(mesh, f=f), config)


def degree_of_samples(samples, mesh: SimplicialMesh, config: DegreeConfig | None = None) -> DegreeResult:
    """Degree of the piecewise-linear map given by per-vertex unit samples."""
    return _degree_of_map(_MapOnMesh(mesh, samples=samples), config)


def _degree_of_map(mm: _MapOnMesh, config: DegreeConfig | None) -> DegreeResult:
    cfg = config or DegreeConfig()
    validate_mesh(mm.mesh, require_closed=True)
    dim = mm.mesh.dim
    depth = _refine_until_fine(mm, cfg)
    rng = np.random.default_rng(cfg.seed)
    while True:
        regular_value = None
        if dim == 1:
            raw = _winding_raw(mm.samples, mm.mesh.simplices, mm.mesh.signs)
            method = "winding"
        elif dim == 2:
            raw = _solid_angle_raw(mm.samples, mm.mesh.simplices, mm.mesh.signs)
            method = "solid-angle"
        else:
            signed, _, v = _regular_value_count(mm, cfg, rng)
            raw = float(signed)
            method = "regular-value"
            regular_value = tuple(v.tolist())
        snapped = int(round(raw))
        residual = abs(raw - snapped)
        if residual < cfg.snap_tol:
            return DegreeResult(
                snapped, raw, residual, depth, method, regular_value, cfg.seed
            )
        factor = {1: 2, 2: 4, 3: 8}.get(mm.mesh.dim, 8)
        if depth >= cfg.max_passes or mm.mesh.n_simplices * factor > cfg.simplex_budget:
            raise DegreeUndecidedError(
                f"degree undecided: residual {residual:.3f} after {depth} refinements"
            )
        mm.refine()
        depth += 1


def mod2_degree(f_or_samples, mesh: SimplicialMesh, config: DegreeConfig | None = None) -> int:
    """Parity of the preimage count of a regular value (0 or 1).

    Accepts a FieldSpec (Gauss map of a field) or explicit per-vertex unit
    samples; the mesh may be non-orientable.
    """
    cfg = config or DegreeConfig()
    validate_mesh(mesh, require_closed=True)
    if isinstance(f_or_samples, FieldSpec):
        mm = _MapOnMesh(mesh, f=f_or_samples)
    else:
        mm = _MapOnMesh(mesh, samples=f_or_samples)
    _refine_until_fine(mm, cfg)
    rng = np.random.default_rng(cfg.seed)
    for _ in range(128):
        v = rng.normal(size=mm.samples.shape[1])
        v /= np.linalg.norm(v)
        counts = _covering_counts(mm.samples, mm.mesh.simplices, mm.mesh.signs, v)
        if counts is not None:
            return counts[1] % 2
    raise DegreeUndecidedError("could not find a regular value clear of all image boundaries")


# ---------------------------------------------------------------------------
# Equilibria


def find_equilibria(
    f: FieldSpec,
    box,
    grid: int = 9,
    tol: float = 1e-9,
    compute_indices: bool = True,
) -> list[Equilibrium]:
    """Newton iteration from a seed grid; converged roots deduplicated at
    radius 10*tol.  Hyperbolic index is sign(det J); degenerate equilibria
    fall back to a small-sphere degree."""
    if f.m != 0:
        raise ValueError("find_equilibria needs closed dynamics (m = 0)")
    box = np.asarray(box, dtype=float)
    if box.shape != (f.n, 2):
        raise ValueError(f"box must be {f.n} (lo, hi) pairs")
    fun = field_function(f)
    jac = jacobian_function(f)
    axes = [np.linspace(lo, hi, grid) for lo, hi in box]
    seeds = np.stack(np.meshgrid(*axes, indexing="ij")).reshape(f.n, -1).T

    slack = 10.0 * tol
    roots: list[np.ndarray] = []
    for seed in seeds:
        x = seed.copy()
        converged = False
        try:
            for _ in range(40):
                fx = np.asarray(fun(x), dtype=float)
                J = np.asarray(jac(x), dtype=float)
                try:
                    step = np.linalg.solve(J, fx)
                except np.linalg.LinAlgError:
                    step = np.linalg.lstsq(J, fx, rcond=None)[0]
                x = x - step
                if not np.all(np.isfinite(x)) or np.linalg.norm(x) > 1e8:
                    break
                if np.linalg.norm(step) < 0.1 * tol:
                    converged = True
                    break
            if not converged or not np.all(np.isfinite(x)):
                continue
            if np.linalg.norm(np.asarray(fun(x), dtype=float)) >= tol:
                continue
        except (ValueError, ZeroDivisionError, OverflowError):
            continue  # seed left the field's domain
        if np.any(x < box[:, 0] - slack) or np.any(x > box[:, 1] + slack):
            continue
        if any(np.linalg.norm(x - r) <= slack for r in roots):
            continue
        roots.append(x)

    roots.sort(key=lambda r: tuple(r))
    out = []
    for x in roots:
        J = np.asarray(jac(x), dtype=float)
        eig = np.linalg.eigvals(J)
        n_stable = int(np.sum(eig.real < -_EIG_TOL))
        n_unstable = int(np.sum(eig.real > _EIG_TOL))
        n_center = f.n - n_stable - n_unstable
        hyperbolic = n_center == 0
        if hyperbolic:
            # sign(det J) = (-1)^(stable count); the eigenvalue count is exact
            index = (-1) ** n_stable
        elif compute_indices:
            index = _degenerate_index(f, x, roots, box)
        else:
            index = 0
        out.append(Equilibrium(x, J, hyperbolic, n_stable, n_unstable, n_center, index))
    return out


def _degenerate_index(f, x, roots, box) -> int:
    """Small-sphere degree fallback for non-hyperbolic equilibria."""
    others = [np.linalg.norm(x - r) for r in roots if np.linalg.norm(x - r) > 0]
    extent = float(np.min(box[:, 1] - box[:, 0]))
    radius = 0.05 * extent
    if others:
        radius = min(radius, 0.3 * min(others))
    if f.n == 1:
        return _index_1d(f, x, radius)
    mesh = build_sphere_mesh(f.n, x, radius, _default_refinement(f.n))
    try:
        return degree(f, mesh).degree
    except (VanishingFieldError, DegreeUndecidedError):
        return 0


def _index_1d(f, e, radius) -> int:
    lo = evaluate_field(f, np.asarray(e) - radius)[0]
    hi = evaluate_field(f, np.asarray(e) + radius)[0]
    if lo == 0.0 or hi == 0.0:
        raise VanishingFieldError("field vanishes on the evaluation pair")
    return int((np.sign(hi) - np.sign(lo)) / 2)


def _default_refinement(n: int) -> int:
    return {2: 3, 3: 2}.get(n, 1)


def topological_index(
    f: FieldSpec,
    e,
    radius: float,
    config: DegreeConfig | None = None,
    tol: float = 1e-9,
) -> DegreeResult:
    """Degree of the Gauss map on a small sphere around e; checked to be
    identical at radius and radius/2.

    Requires e to be the only equilibrium within 2*radius (verified with
    find_equilibria on the enclosing box).
    """
    e = np.asarray(e, dtype=float)
    if e.shape != (f.n,):
        raise ValueError(f"equilibrium point must have length {f.n}")
    box = np.stack([e - 2.0 * radius, e + 2.0 * radius], axis=1)
    found = find_equilibria(f, box, grid=7, tol=tol, compute_indices=False)
    strays = [
        eq.location
        for eq in found
        if np.linalg.norm(eq.location - e) > 10.0 * tol
        and np.linalg.norm(eq.location - e) <= 2.0 * radius
    ]
    if strays:
        raise IsolationError(
            f"second equilibrium at {strays[0].tolist()} inside radius {2.0 * radius}"
        )

    if f.n == 1:
        results = []
        for r in (radius, radius / 2.0):
            k = _index_1d(f, e, r)
            results.append(DegreeResult(k, float(k), 0.0, 0, "sign-evaluation"))
    else:
        results = []
        for r in (radius, radius / 2.0):
            mesh = build_sphere_mesh(f.n, e, r, _default_refinement(f.n))
            results.append(degree(f, mesh, config))
    if results[0].degree != results[1].degree:
        raise DegreeUndecidedError(
            f"index differs across radii: {results[0].degree} vs {results[1].degree}"
        )
    return results[0]


def hyperbolic_index(J) -> int:
    """sign(det J) for a hyperbolic Jacobian.

    Equals (-1)**(count of eigenvalues with negative real part), hence
    (-1)**(n-k) with k the unstable dimension; complex pairs contribute +1
    either way, so the eigenvalue count gives the sign exactly.
    """
    J = np.asarray(J, dtype=float)
    eig = np.linalg.eigvals(J)
    if np.any(np.abs(eig.real) < _EIG_TOL):
        raise NonHyperbolicError("an eigenvalue real part is within 1e-7 of zero")
    return (-1) ** int(np.sum(eig.real < 0))
