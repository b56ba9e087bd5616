"""Necessary-condition checkers for achievable control dynamics.

Each checker is a pure function of immutable inputs plus an explicit seed
and returns a ConditionReport with numeric evidence.  Verdicts: pass,
violated, degenerate (hypothesis fails structurally), undecided (budget
ran out before a decision).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .degree import (
    DegreeConfig,
    degree,
    find_equilibria,
    mod2_degree,
    topological_index,
    _covering_counts,
    _MapOnMesh,
    _refine_until_fine,
)
from .errors import (
    BoundaryEquilibriumError,
    DegreeUndecidedError,
    IsolationError,
    LyapunovHypothesisError,
    MeshError,
    NoReturnError,
    NonContractingError,
    VanishingFieldError,
)
from .fieldlang import (
    FieldSpec,
    ScalarSpec,
    close_loop,
    evaluate_field,
    field_function,
    field_function_vectorized,
    gradient,
    negated,
)
from .homology import euler_characteristic
from .mesh import SimplicialMesh, orient_mesh, validate_mesh


@dataclass
class ConditionReport:
    condition: str
    verdict: str  # pass | violated | degenerate | undecided
    expected: float | int | str | None
    observed: float | int | str | None
    tolerance: dict
    seed: int | None
    evidence: list[dict]
    runtime_ms: float = 0.0

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "verdict": self.verdict,
            "expected": self.expected,
            "observed": self.observed,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "evidence": self.evidence,
            "runtime_ms": self.runtime_ms,
        }


@dataclass(frozen=True)
class ClosedCurve:
    """A sampled closed orbit, equally spaced in time, endpoint not repeated."""

    points: np.ndarray  # (K, n)
    period: float
    closure_residual: float

    def __post_init__(self):
        object.__setattr__(self, "points", np.asarray(self.points, dtype=float))
        if self.closure_residual >= 1e-6:
            raise ValueError(f"curve is not closed: residual {self.closure_residual}")
        gaps = np.linalg.norm(np.roll(self.points, -1, axis=0) - self.points, axis=1)
        if gaps.max() >= 0.1:
            raise ValueError(f"consecutive samples too far apart: {gaps.max():.3f}")


@dataclass(frozen=True)
class ControlNeighborhood:
    # the condition is local: the state ball must stay small against epsilon,
    # otherwise bracket terms x*u can trade off against the control cost
    state_radius: float = 0.25
    control_radius: float = 1.0
    epsilon: float = 0.1
    grid_size: int = 32
    budget: int = 400_000
    starts: int = 16

    def __post_init__(self):
        if min(self.state_radius, self.control_radius, self.epsilon) <= 0:
            raise ValueError("all radii must be positive")


def _evidence(label: str, values) -> dict:
    return {"label": label, "values": [float(v) for v in np.ravel(values)]}


def _elapsed_ms(t0: float) -> float:
    return (time.perf_counter() - t0) * 1000.0


# ---------------------------------------------------------------------------
# Poincare-Hopf balance


def _ray_crossing_parity(point, mesh: SimplicialMesh, rng) -> int:
    """Parity of intersections of a generic ray from `point` with the mesh."""
    n = mesh.ambient_dim
    verts = mesh.vertices[mesh.simplices]  # (T, n, n)
    T = verts.shape[0]
    A = np.empty((T, n + 1, n + 1))
    A[:, :n, :n] = np.transpose(verts, (0, 2, 1))
    A[:, n, :n] = 1.0
    A[:, n, n] = 0.0
    b = np.empty(n + 1)
    b[:n] = point
    b[n] = 1.0
    for _ in range(64):
        d = rng.normal(size=n)
        d /= np.linalg.norm(d)
        A[:, :n, n] = -d
        dets = np.linalg.det(A)
        if np.any(np.abs(dets) < 1e-12):
            continue
        sol = np.linalg.solve(A, np.broadcast_to(b, (T, n + 1))[:, :, None])[:, :, 0]
        lam, t = sol[:, :n], sol[:, n]
        eps = 1e-9
        ambiguous = (np.abs(t) < eps) | (
            (t > 0) & (np.abs(lam) < eps).any(axis=1) & (lam > -eps).all(axis=1)
        )
        if np.any(ambiguous):
            continue
        hits = (t > eps) & (lam > eps).all(axis=1)
        return int(np.count_nonzero(hits)) % 2
    raise DegreeUndecidedError("no generic ray found for containment test")


def poincare_hopf_check(
    f: FieldSpec,
    boundary: list[SimplicialMesh],
    region,
    grid: int = 9,
    tol: float = 1e-9,
    seed: int = 0,
    config: DegreeConfig | None = None,
) -> ConditionReport:
    """Boundary Gauss-map degree against the enclosed equilibrium index sum.

    Inner boundary components (contained in an odd number of the others)
    contribute with reversed orientation.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    cfg = config or DegreeConfig(seed=seed)

    for i, mesh in enumerate(boundary):
        validate_mesh(mesh, require_closed=True)
        vals = field_function_vectorized(f)(mesh.vertices.T)
        worst = float(np.linalg.norm(vals, axis=1).min())
        if worst <= 1e-8:
            raise BoundaryEquilibriumError(
                f"field vanishes on boundary component {i} (min |X| = {worst:.2e})"
            )

    evidence = []
    verdict = "pass"
    boundary_sum = 0
    try:
        for j, mesh in enumerate(boundary):
            depth = sum(
                _ray_crossing_parity(mesh.vertices[0], other, rng)
                for i, other in enumerate(boundary)
                if i != j
            )
            factor = -1 if depth % 2 else 1
            deg = degree(f, mesh, cfg).degree
            boundary_sum += factor * deg
            evidence.append(_evidence("component_degree", [j, factor, deg]))
    except DegreeUndecidedError:
        return ConditionReport(
            "poincare_hopf", "undecided", None, None, {"tol": tol},
            seed, [_evidence("error", [0])], _elapsed_ms(t0),
        )

    equilibria = find_equilibria(f, region, grid=grid, tol=tol)
    index_sum = 0
    for eq in equilibria:
        parity = sum(
            _ray_crossing_parity(eq.location, mesh, rng) for mesh in boundary
        )
        if parity % 2 == 0:
            continue
        index_sum += eq.index
        evidence.append(
            _evidence("equilibrium", list(eq.location) + [eq.index])
        )

    if boundary_sum != index_sum:
        verdict = "violated"
    return ConditionReport(
        "poincare_hopf", verdict, boundary_sum, index_sum,
        {"tol": tol, "exact": True}, seed, evidence, _elapsed_ms(t0),
    )


def flat_torus_index_check(
    f: FieldSpec,
    box,
    grid: int = 9,
    tol: float = 1e-9,
    seed: int = 0,
    boundary_samples: int = 16,
) -> ConditionReport:
    """Index sum of a periodic field on the flat torus; must equal zero.

    The field is checked to be periodic on the fundamental-domain boundary
    (mismatch < 1e-9) before edges are identified.
    """
    t0 = time.perf_counter()
    box = np.asarray(box, dtype=float)
    periods = box[:, 1] - box[:, 0]
    rng = np.random.default_rng(seed)
    fun = field_function(f)
    for axis in range(f.n):
        for _ in range(boundary_samples):
            x = box[:, 0] + rng.uniform(size=f.n) * periods
            x[axis] = box[axis, 0]
            y = x.copy()
            y[axis] = box[axis, 1]
            gap = np.linalg.norm(
                np.asarray(fun(x), dtype=float) - np.asarray(fun(y), dtype=float)
            )
            if gap >= 1e-9:
                raise ValueError(
                    f"field is not periodic across axis {axis + 1}: mismatch {gap:.2e}"
                )

    equilibria = find_equilibria(f, box, grid=grid, tol=tol)
    canonical = []
    evidence = []
    index_sum = 0
    for eq in equilibria:
        y = (eq.location - box[:, 0]) % periods
        y[y > periods - 1e-6] = 0.0
        if any(np.linalg.norm(y - c) <= 10.0 * tol for c in canonical):
            continue
        canonical.append(y)
        index_sum += eq.index
        evidence.append(_evidence("equilibrium", list(y + box[:, 0]) + [eq.index]))

    verdict = "pass" if index_sum == 0 else "violated"
    return ConditionReport(
        "flat_torus_index", verdict, 0, index_sum,
        {"tol": tol, "exact": True}, seed, evidence, _elapsed_ms(t0),
    )


# ---------------------------------------------------------------------------
# Brockett surjectivity


def _direction_grid(n: int, count: int, rng) -> np.ndarray:
    dirs = []
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        dirs.extend([e.copy(), -e])
    while len(dirs) < count:
        v = rng.normal(size=n)
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            dirs.append(v / norm)
    return np.array(dirs[:count])


def brockett_surjectivity_check(
    f: FieldSpec,
    nbhd: ControlNeighborhood | None = None,
    seed: int = 0,
) -> ConditionReport:
    """Can (x, u) -> f(x, u) reach every direction of norm epsilon?

    Multi-start Nelder-Mead descent of |f(x,u) - eps*d|^2 over the state and
    control balls, for each target direction d on a grid containing all
    coordinate axis directions.  A direction passes when its best residual
    drops below 0.05*eps.
    """
    t0 = time.perf_counter()
    if f.m < 1:
        raise ValueError("brockett check needs a control system (m >= 1)")
    nbhd = nbhd or ControlNeighborhood()
    origin = evaluate_field(f, np.zeros(f.n), np.zeros(f.m))
    if np.linalg.norm(origin) > 1e-9:
        raise ValueError("f(0, 0) must vanish for the surjectivity check")

    rng = np.random.default_rng(seed)
    dirs = _direction_grid(f.n, nbhd.grid_size, rng)
    fun = field_function(f)
    evals = 0

    def clipped(v, radius):
        norm = np.linalg.norm(v)
        return v if norm <= radius else v * (radius / norm)

    def best_residual(d):
        nonlocal evals
        target = nbhd.epsilon * d

        def objective(y):
            nonlocal evals
            evals += 1
            x = clipped(y[: f.n], nbhd.state_radius)
            u = clipped(y[f.n :], nbhd.control_radius)
            r = np.asarray(fun(x, u), dtype=float) - target
            return float(r @ r)

        dim = f.n + f.m
        best = math.inf
        for s in range(nbhd.starts):
            if evals >= nbhd.budget:
                break
            if s == 0:
                y0 = np.zeros(dim)
            else:
                y0 = np.concatenate(
                    [
                        rng.uniform(-1, 1, f.n) * nbhd.state_radius / np.sqrt(f.n),
                        rng.uniform(-1, 1, f.m) * nbhd.control_radius / np.sqrt(f.m),
                    ]
                )
            res = minimize(
                objective, y0, method="Nelder-Mead",
                options={"maxfev": 120 * dim, "xatol": 1e-8, "fatol": 1e-16},
            )
            best = min(best, float(res.fun))
            if math.sqrt(best) < 0.01 * nbhd.epsilon:
                break
        return math.sqrt(best) if math.isfinite(best) else math.inf

    threshold = 0.05 * nbhd.epsilon
    violated = []
    evidence = []
    resolved = 0
    for d in dirs:
        if evals >= nbhd.budget:
            break
        residual = best_residual(d)
        resolved += 1
        evidence.append(_evidence("direction_residual", list(d) + [residual]))
        if residual >= threshold:
            violated.append((d, residual))

    tolerance = {
        "residual_threshold": threshold,
        "epsilon": nbhd.epsilon,
        "grid": nbhd.grid_size,
    }
    if resolved == 0:
        return ConditionReport(
            "brockett_surjectivity", "undecided", 0.0, None, tolerance,
            seed, evidence, _elapsed_ms(t0),
        )
    worst = max((r for _, r in violated), default=0.0)
    if violated:
        for d, r in violated:
            evidence.append(_evidence("violated_direction", list(d) + [r]))
        return ConditionReport(
            "brockett_surjectivity", "violated", 0.0, worst, tolerance,
            seed, evidence, _elapsed_ms(t0),
        )
    if resolved < len(dirs):
        return ConditionReport(
            "brockett_surjectivity", "undecided", 0.0, worst, tolerance,
            seed, evidence, _elapsed_ms(t0),
        )
    return ConditionReport(
        "brockett_surjectivity", "pass", 0.0, worst, tolerance,
        seed, evidence, _elapsed_ms(t0),
    )


# ---------------------------------------------------------------------------
# Closed-loop index


def closed_loop_index_check(
    f: FieldSpec,
    feedback: FieldSpec,
    e,
    radius: float,
    expected_k: int = 0,
    tol: float = 1e-9,
    seed: int = 0,
    config: DegreeConfig | None = None,
) -> ConditionReport:
    """Index of the closed loop X+U at e against (-1)**(n - expected_k).

    expected_k = 0 is the stabilization case (-1)**n.  Verdict `degenerate`
    when the closed-loop field has further zeros near e (non-isolated).
    """
    t0 = time.perf_counter()
    closed = close_loop(f, feedback)
    e = np.asarray(e, dtype=float)
    at_e = evaluate_field(closed, e)
    if np.linalg.norm(at_e) > 1e-8:
        raise ValueError("e is not an equilibrium of the closed loop")

    expected = (-1) ** (f.n - expected_k)
    box = np.stack([e - 2.0 * radius, e + 2.0 * radius], axis=1)
    found = find_equilibria(closed, box, grid=7, tol=tol, compute_indices=False)
    strays = [
        eq.location
        for eq in found
        if 10.0 * tol < np.linalg.norm(eq.location - e) <= 2.0 * radius
    ]
    if strays:
        evidence = [_evidence("extra_zero", s) for s in strays[:8]]
        return ConditionReport(
            "closed_loop_index", "degenerate", expected, None,
            {"tol": tol, "radius": radius}, seed, evidence, _elapsed_ms(t0),
        )

    try:
        result = topological_index(closed, e, radius, config, tol=tol)
    except IsolationError:
        return ConditionReport(
            "closed_loop_index", "degenerate", expected, None,
            {"tol": tol, "radius": radius}, seed,
            [_evidence("isolation_failure", [0])], _elapsed_ms(t0),
        )
    verdict = "pass" if result.degree == expected else "violated"
    evidence = [_evidence("index", [result.degree, result.raw, result.residual])]
    return ConditionReport(
        "closed_loop_index", verdict, expected, result.degree,
        {"tol": tol, "radius": radius, "exact": True}, seed, evidence, _elapsed_ms(t0),
    )


# ---------------------------------------------------------------------------
# Limit cycles


@dataclass(frozen=True)
class CycleConfig:
    dt: float = 0.002
    max_time: float = 400.0
    return_tol: float = 1e-6
    contraction: float = 0.9
    samples: int = 512


def _rk4_step(fun, x, h):
    k1 = fun(x)
    y = [xi + 0.5 * h * ki for xi, ki in zip(x, k1)]
    k2 = fun(y)
    y = [xi + 0.5 * h * ki for xi, ki in zip(x, k2)]
    k3 = fun(y)
    y = [xi + h * ki for xi, ki in zip(x, k3)]
    k4 = fun(y)
    return [
        xi + (h / 6.0) * (a + 2.0 * b + 2.0 * c + d)
        for xi, a, b, c, d in zip(x, k1, k2, k3, k4)
    ]


def locate_limit_cycle(
    f: FieldSpec,
    seed_point,
    config: CycleConfig | None = None,
) -> ClosedCurve:
    """Integrate to a Poincare section through the seed until the return map
    contracts; returns the closed orbit sampled equally in time.

    Fixed-step 4th-order integration; crossings are refined by a secant
    iteration on the sub-step.  Raises NoReturnError / NonContractingError
    when the seed does not lead to an isolated attracting cycle.
    """
    cfg = config or CycleConfig()
    if f.n not in (2, 3):
        raise ValueError("limit cycle location supports n = 2 or 3")
    fun = field_function(f)
    p0 = [float(v) for v in seed_point]
    f0 = fun(p0)
    norm0 = math.sqrt(sum(v * v for v in f0))
    if norm0 <= 1e-10:
        raise VanishingFieldError("seed point is an equilibrium")
    normal = [v / norm0 for v in f0]

    def section(x):
        return sum(nv * (xv - pv) for nv, xv, pv in zip(normal, x, p0))

    crossings: list[tuple[float, list[float]]] = []
    diffs: list[float] = []
    x = p0
    t = 0.0
    s_prev = 0.0
    contraction_seen = False
    while t < cfg.max_time:
        x_new = _rk4_step(fun, x, cfg.dt)
        t_new = t + cfg.dt
        s_new = section(x_new)
        if s_prev < 0.0 <= s_new:
            tau = cfg.dt * s_prev / (s_prev - s_new)
            xc, tc = _refine_crossing(fun, section, x, t, tau, cfg.dt)
            crossings.append((tc, xc))
            if len(crossings) >= 2:
                d = math.dist(crossings[-1][1], crossings[-2][1])
                diffs.append(d)
                if len(diffs) >= 2 and diffs[-2] > 1e-12:
                    if diffs[-1] < cfg.contraction * diffs[-2]:
                        contraction_seen = True
                if d < cfg.return_tol and contraction_seen:
                    return _resample_cycle(fun, crossings, cfg)
        x, t, s_prev = x_new, t_new, s_new
    if len(crossings) < 2:
        raise NoReturnError("no return to the section within the time budget")
    raise NonContractingError(
        "return map does not contract toward an isolated cycle "
        f"(last return displacement {diffs[-1]:.2e})"
    )


def _refine_crossing(fun, section, x_prev, t_prev, tau, dt):
    def value(h):
        if h <= 0.0:
            return section(x_prev), x_prev
        xh = _rk4_step(fun, x_prev, h)
        return section(xh), xh

    h0, h1 = 0.0, min(max(tau, 1e-12), dt)
    g0, _ = value(h0)
    g1, x1 = value(h1)
    for _ in range(8):
        if g1 == g0:
            break
        h2 = h1 - g1 * (h1 - h0) / (g1 - g0)
        h2 = min(max(h2, 0.0), dt)
        g2, x2 = value(h2)
        h0, g0 = h1, g1
        h1, g1, x1 = h2, g2, x2
        if abs(g1) < 1e-13:
            break
    return x1, t_prev + h1


def _resample_cycle(fun, crossings, cfg: CycleConfig) -> ClosedCurve:
    (t_a, x_a), (t_b, _) = crossings[-2], crossings[-1]
    period = t_b - t_a
    samples = cfg.samples
    while True:
        pts = [list(x_a)]
        x = list(x_a)
        interval = period / samples
        sub = max(1, math.ceil(interval / cfg.dt))
        h = interval / sub
        for _ in range(samples):
            for _ in range(sub):
                x = _rk4_step(fun, x, h)
            pts.append(list(x))
        arr = np.array(pts[:-1])
        residual = float(np.linalg.norm(np.array(pts[-1]) - np.array(pts[0])))
        gaps = np.linalg.norm(np.roll(arr, -1, axis=0) - arr, axis=1)
        if gaps.max() < 0.1 or samples >= 8192:
            return ClosedCurve(arr, period, residual)
        samples *= 2


# ---------------------------------------------------------------------------
# Hemisphere / Gauss-image tests on cycles


def _normals_grid(n: int, count: int) -> np.ndarray:
    if n == 2:
        angles = 2.0 * np.pi * np.arange(count) / count
        return np.column_stack([np.cos(angles), np.sin(angles)])
    # deterministic Fibonacci sphere
    k = np.arange(count)
    z = 1.0 - (2.0 * k + 1.0) / count
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, 1.0))
    golden = np.pi * (3.0 - np.sqrt(5.0))
    return np.column_stack([r * np.cos(golden * k), r * np.sin(golden * k), z])


def hemisphere_test(
    f: FieldSpec,
    cycle: ClosedCurve,
    normal_grid: int = 64,
    seed: int = 0,
) -> ConditionReport:
    """The Gauss image of a limit cycle must meet every hyperplane.

    For each hyperplane normal `a` on a grid, the inner products
    a . G(gamma(t_i)) must change sign; for generic normals (no sample
    within 1e-6 of the hyperplane) the cyclic crossing count must be even.
    """
    t0 = time.perf_counter()
    n = cycle.points.shape[1]
    vals = field_function_vectorized(f)(cycle.points.T)
    norms = np.linalg.norm(vals, axis=1)
    if np.any(norms <= 1e-10):
        idx = int(np.argmin(norms))
        raise VanishingFieldError(
            f"field vanishes on cycle sample {cycle.points[idx].tolist()}"
        )
    G = vals / norms[:, None]
    normals = _normals_grid(n, normal_grid)

    touch_tol = 1e-6
    evidence = []
    uncovered = []
    crossing_counts = []
    for a in normals:
        s = G @ a
        touched = bool(np.any(np.abs(s) < touch_tol))
        signs = np.sign(s)
        flips = int(np.count_nonzero(signs != np.roll(signs, -1)))
        covered = touched or (s.min() < -touch_tol and s.max() > touch_tol)
        crossing_counts.append(flips)
        evidence.append(
            _evidence("normal", list(a) + [flips, 0.0 if touched else 1.0])
        )
        if not covered:
            uncovered.append(a)
    for a in uncovered:
        evidence.append(_evidence("uncovered_normal", a))

    verdict = "pass" if not uncovered else "violated"
    observed = int(normal_grid - len(uncovered))
    # keep a trace of the Gauss image for rendering
    step = max(1, len(G) // 256)
    evidence.append(_evidence("gauss_image", G[::step].ravel()))
    return ConditionReport(
        "hemisphere", verdict, int(normal_grid), observed,
        {"touch_tol": touch_tol, "normal_grid": normal_grid},
        seed, evidence, _elapsed_ms(t0),
    )


# ---------------------------------------------------------------------------
# Lyapunov level-set isotopy and preimage multiplicity


def isotopy_check(
    f: FieldSpec,
    V: ScalarSpec,
    mesh: SimplicialMesh,
    t_grid: int = 32,
    seed: int = 0,
    config: DegreeConfig | None = None,
) -> ConditionReport:
    """Interpolate between the descent direction and the dynamics on a
    regular Lyapunov level set and verify the two Gauss maps share a degree.

    Hypothesis grad(V) . X < 0 is checked at every vertex first; then
    Y_t = (1-t) X_n + t X must stay nonvanishing on a t-grid, with X_n the
    projection of X onto the gradient direction.
    """
    t0 = time.perf_counter()
    cfg = config or DegreeConfig(seed=seed)
    verts = mesh.vertices
    X = field_function_vectorized(f)(verts.T)
    g = field_function_vectorized(gradient(V))(verts.T)
    descent = np.einsum("ij,ij->i", g, X)
    if np.any(descent >= 0.0):
        idx = int(np.argmax(descent))
        raise LyapunovHypothesisError(
            f"grad(V) . X = {descent[idx]:.3e} >= 0 at {verts[idx].tolist()}",
            witness=verts[idx].copy(),
        )
    g_norm2 = np.einsum("ij,ij->i", g, g)
    X_n = (descent / g_norm2)[:, None] * g

    min_norm = math.inf
    for t in np.linspace(0.0, 1.0, t_grid):
        Y = (1.0 - t) * X_n + t * X
        min_norm = min(min_norm, float(np.linalg.norm(Y, axis=1).min()))
    evidence = [_evidence("min_interpolant_norm", [min_norm])]
    if min_norm <= 1e-9:
        return ConditionReport(
            "isotopy", "violated", None, min_norm,
            {"interpolant_min": 1e-9, "t_grid": t_grid},
            seed, evidence, _elapsed_ms(t0),
        )

    deg_X = degree(f, mesh, cfg).degree
    deg_grad = degree(negated(gradient(V)), mesh, cfg).degree
    evidence.append(_evidence("degrees", [deg_X, deg_grad]))
    verdict = "pass" if deg_X == deg_grad else "violated"
    return ConditionReport(
        "isotopy", verdict, deg_grad, deg_X,
        {"interpolant_min": 1e-9, "t_grid": t_grid, "exact": True},
        seed, evidence, _elapsed_ms(t0),
    )


def preimage_count_check(
    V: ScalarSpec,
    mesh: SimplicialMesh,
    direction_grid: int = 128,
    seed: int = 0,
    config: DegreeConfig | None = None,
) -> ConditionReport:
    """Every direction on the sphere is hit at least twice by the Gauss map
    of -grad(V) on a torus-shaped level set."""
    t0 = time.perf_counter()
    cfg = config or DegreeConfig(seed=seed)
    validate_mesh(mesh, require_closed=True)
    chi = euler_characteristic(mesh)
    if chi != 0:
        raise MeshError(f"mesh is not a torus: Euler characteristic {chi} != 0")

    mm = _MapOnMesh(mesh, f=negated(gradient(V)))
    _refine_until_fine(mm, cfg)
    rng = np.random.default_rng(seed)
    counts = []
    skipped = 0
    worst = None
    for _ in range(direction_grid):
        v = rng.normal(size=3)
        v /= np.linalg.norm(v)
        result = _covering_counts(mm.samples, mm.mesh.simplices, mm.mesh.signs, v)
        if result is None:
            skipped += 1
            continue
        counts.append(result[1])
        if worst is None or result[1] < worst[1]:
            worst = (v, result[1])
    tolerance = {"direction_grid": direction_grid, "min_multiplicity": 2}
    if not counts or skipped > direction_grid // 2:
        return ConditionReport(
            "preimage_count", "undecided", 2, None, tolerance, seed,
            [_evidence("skipped", [skipped])], _elapsed_ms(t0),
        )
    min_count = min(counts)
    evidence = [
        _evidence("min_multiplicity", [min_count]),
        _evidence("worst_direction", list(worst[0]) + [worst[1]]),
        _evidence("generic_directions", [len(counts)]),
    ]
    verdict = "pass" if min_count >= 2 else "violated"
    return ConditionReport(
        "preimage_count", verdict, 2, min_count, tolerance, seed,
        evidence, _elapsed_ms(t0),
    )


# ---------------------------------------------------------------------------
# Hopf-Whitney classification


def classify_homotopy_class(
    mesh: SimplicialMesh,
    f_or_samples,
    expected: int | None = None,
    seed: int = 0,
    config: DegreeConfig | None = None,
) -> ConditionReport:
    """Homotopy class of a nonvanishing map on a closed mesh: the integer
    degree when the mesh is orientable, the mod-2 degree otherwise."""
    t0 = time.perf_counter()
    cfg = config or DegreeConfig(seed=seed)
    report = orient_mesh(mesh)
    if report.orientable:
        oriented = SimplicialMesh(mesh.vertices, mesh.simplices, report.signs)
        if isinstance(f_or_samples, FieldSpec):
            result = degree(f_or_samples, oriented, cfg)
        else:
            from .degree import degree_of_samples

            result = degree_of_samples(f_or_samples, oriented, cfg)
        observed = result.degree
        method = "degree"
        evidence = [_evidence("degree", [result.degree, result.raw, result.residual])]
    else:
        observed = mod2_degree(f_or_samples, mesh, cfg)
        method = "mod2-degree"
        evidence = [_evidence("mod2_degree", [observed])]
    verdict = "pass" if expected is None or observed == expected else "violated"
    return ConditionReport(
        "homotopy_class", verdict,
        expected if expected is not None else observed, observed,
        {"method": method, "exact": True}, seed, evidence, _elapsed_ms(t0),
    )
