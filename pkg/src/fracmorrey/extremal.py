"""Discrete extremals and the Poincare constant Lambda_{s,p}(B_1).

The sharp Morrey constant is the minimum of the Gagliardo energy among
functions with two prescribed point values,

    m_{s,p} = min { [u]^p : u(x0) = a, u(y0) = b } |x0 - y0|^{sp-N} / |a-b|^p,

and the minimiser is an extremal.  On a grid this is a convex problem in the
free node values.  Lambda_{s,p}(B_1) is the minimum of the regional energy on
B_1 among functions with unit L^p norm that vanish at the centre.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import linalg
from scipy.sparse.linalg import eigsh

from . import _kernels
from .params import (
    DomainError,
    FracParams,
    NumericFailure,
    theta_constant,
    unit_ball_volume,
)
from .quadrature import (
    GridFunction,
    PairWeights,
    _dual_cells,
    _pair_weights,
    holder_seminorm_grid,
    local_gagliardo_grid,
)

DEFAULT_SEED = 20240917
# for p < 2 the gradient is only Hoelder near equal values, so tighter is unreachable
SUBQUADRATIC_GTOL = 1e-9


# ---------------------------------------------------------------------------
# problem description


@dataclass(frozen=True)
class PinnedProblem:
    """Minimise the box energy with u(x0) = a and u(y0) = b.

    The grid is uniform with half-width L and n nodes per axis, centred at
    ``origin``; pairs leave the box without interaction.
    """

    params: FracParams
    L: float
    n: int
    x0: object
    y0: object
    a: float = 0.0
    b: float = 1.0
    origin: object = 0.0

    def __post_init__(self):
        N = self.params.dim
        if N not in (1, 2):
            raise DomainError("pinned problems are posed in 1-D or 2-D")
        if self.a == self.b:
            raise DomainError("pinned values must differ")
        g = self.grid()
        i, j = self.pinned_indices()
        pts = g.points()
        if i == j:
            raise DomainError("pinned nodes must differ")
        if np.linalg.norm(pts[i] - pts[j]) < 2.0 * g.h * (1.0 - 1e-12):
            raise DomainError("pinned nodes must be at least two cells apart")

    @property
    def dim(self) -> int:
        return self.params.dim

    def grid(self, values=None) -> GridFunction:
        n, N = self.n, self.params.dim
        v = np.zeros(n if N == 1 else n * n) if values is None else values
        return GridFunction(N, self.L, n, v, origin=self.origin)

    def _index(self, x) -> int:
        g = self.grid()
        N = self.params.dim
        x = np.broadcast_to(np.asarray(x, dtype=float), (N,))
        org = np.broadcast_to(np.asarray(g.origin, dtype=float), (N,))
        k = (x - (org - self.L)) / g.h
        ki = np.rint(k)
        if np.any(np.abs(k - ki) > 1e-9) or np.any(ki < 0) or np.any(ki > self.n - 1):
            raise DomainError(f"pinned point {tuple(x)} is not a grid node")
        ki = ki.astype(int)
        return int(ki[0]) if N == 1 else int(ki[0] * self.n + ki[1])

    def pinned_indices(self) -> tuple[int, int]:
        return self._index(self.x0), self._index(self.y0)

    def separation(self) -> float:
        x = np.broadcast_to(np.asarray(self.x0, dtype=float), (self.dim,))
        y = np.broadcast_to(np.asarray(self.y0, dtype=float), (self.dim,))
        return float(np.linalg.norm(x - y))


@dataclass(frozen=True)
class SolverConfig:
    method: str = "newton"  # "newton" or "agd"
    gtol: float = 1e-12  # free-gradient max-norm relative to the pinned gradient
    max_iter: int = 200
    agd_max_iter: int = 200000
    delta: float = 1e-10  # Hessian regularisation, relative to |a-b|
    init: str = "ramp"  # "ramp" or "random"
    seed: int = DEFAULT_SEED


@dataclass
class ExtremalSolution:
    u: GridFunction
    energy: float
    holderSeminorm: float
    argmaxPair: tuple
    elResidualMax: float
    morreyEstimate: float
    iterations: int
    converged: bool
    gradient: np.ndarray = field(repr=False, default=None)
    pinned: tuple = (-1, -1)


# ---------------------------------------------------------------------------
# energy


def dense_weights(params: FracParams, grid: GridFunction) -> np.ndarray:
    return np.ascontiguousarray(_pair_weights(params.s, params.p, grid).dense())


def discrete_energy_and_gradient(params: FracParams, u: GridFunction, weights=None):
    """Energy sum_{i != j} w_ij |u_i - u_j|^p and its gradient.

    ``weights`` may be a dense matrix or a ``PairWeights``; by default the
    box weights of the quadrature scheme.  At zero differences (p < 2) the
    subgradient selection J_p(0) = 0 is used.
    """
    if weights is None:
        W = dense_weights(params, u)
    elif isinstance(weights, PairWeights):
        W = np.ascontiguousarray(weights.dense())
    else:
        W = np.ascontiguousarray(weights, dtype=float)
    e, g = _kernels.dense_energy_grad(u.values, W, params.p)
    return float(e), g


def _node_weights(grid: GridFunction) -> np.ndarray:
    if grid.dim == 1 and not grid.uniform:
        return _dual_cells(grid.coords)
    size = grid.n if grid.dim == 1 else grid.n * grid.n
    return np.full(size, grid.h ** grid.dim)


# ---------------------------------------------------------------------------
# pinned solver


def _initial(problem: PinnedProblem, cfg: SolverConfig) -> np.ndarray:
    g = problem.grid()
    pts = g.points()
    i, j = problem.pinned_indices()
    a, b = problem.a, problem.b
    if cfg.init == "ramp":
        d = pts[j] - pts[i]
        t = np.clip((pts - pts[i]) @ d / float(d @ d), 0.0, 1.0)
        u = a + (b - a) * t
    elif cfg.init == "random":
        rng = np.random.default_rng(cfg.seed)
        u = rng.uniform(min(a, b), max(a, b), size=pts.shape[0])
    else:
        raise DomainError(f"unknown initialisation {cfg.init!r}")
    u[i], u[j] = a, b
    return u


def _spd_solve(H: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Solve H x = r for a symmetric positive semi-definite H.

    The matrix is Jacobi scaled first (the entries span many decades on
    graded meshes and for large p); if Cholesky still fails, a growing
    multiple of the identity is added to the scaled matrix.
    """
    d = np.sqrt(np.abs(np.diag(H)))
    d[d == 0.0] = 1.0
    Hs = H / d[:, None] / d[None, :]
    rs = r / d
    jitter = 0.0
    for _ in range(12):
        try:
            c = linalg.cho_factor(Hs + jitter * np.eye(Hs.shape[0]) if jitter else Hs, check_finite=False)
            return linalg.cho_solve(c, rs, check_finite=False) / d
        except linalg.LinAlgError:
            jitter = 1e-14 if jitter == 0.0 else jitter * 100.0
    raise NumericFailure("Newton system is not positive definite")


def _capped(step: np.ndarray, cap: float) -> np.ndarray:
    """Scale a Newton step down to max-norm ``cap`` (a crude trust region).

    For large p the Hessian nearly vanishes where the iterate is flat and
    the raw step can leave the region where the quadratic model holds.
    """
    m = float(np.max(np.abs(step)))
    return step * (cap / m) if m > cap else step


def _newton(u, W, p, free, delta, cfg):
    it = 0
    gtol = cfg.gtol if p >= 2.0 else max(cfg.gtol, SUBQUADRATIC_GTOL)
    scale_u = float(np.max(u[~free]) - np.min(u[~free]))
    e, g = _kernels.dense_energy_grad(u, W, p)
    fixed = ~free
    H = None
    for it in range(1, cfg.max_iter + 1):
        scale = np.max(np.abs(g[fixed]))
        gf = g[free]
        if np.max(np.abs(gf)) <= gtol * scale:
            return u, e, g, it - 1, True
        if H is None or p != 2.0:
            H = _kernels.dense_hessian(u, W, p, delta)[np.ix_(free, free)]
        step = _capped(-_spd_solve(H, gf), 0.5 * scale_u)
        t = 1.0
        slope = float(gf @ step)
        while True:
            trial = u.copy()
            trial[free] += t * step
            et, gt = _kernels.dense_energy_grad(trial, W, p)
            if et <= e + 1e-4 * t * slope or t < 1e-10:
                break
            t *= 0.5
        if et > e and t < 1e-10:
            # no decrease is measurable any more: accept only if the gradient improved
            if np.max(np.abs(gt[free])) >= np.max(np.abs(gf)):
                return u, e, g, it, False
        u, e, g = trial, et, gt
    scale = np.max(np.abs(g[fixed]))
    return u, e, g, cfg.max_iter, bool(np.max(np.abs(g[free])) <= gtol * scale)


def _agd(u, W, p, free, lo, hi, cfg):
    """Accelerated projected gradient with backtracking and adaptive restart."""
    e, g = _kernels.dense_energy_grad(u, W, p)
    fixed = ~free
    L_est = 2.0 * p * max(p - 1.0, 1.0) * float(np.max(W.sum(axis=1)))
    y = u.copy()
    t_k = 1.0
    for it in range(1, cfg.agd_max_iter + 1):
        scale = np.max(np.abs(g[fixed]))
        if np.max(np.abs(g[free])) <= cfg.gtol * scale:
            return u, e, g, it - 1, True
        ey, gy = _kernels.dense_energy_grad(y, W, p)
        while True:
            x_new = y.copy()
            x_new[free] = np.clip(y[free] - gy[free] / L_est, lo, hi)
            en, gn = _kernels.dense_energy_grad(x_new, W, p)
            d = x_new[free] - y[free]
            if en <= ey + gy[free] @ d + 0.5 * L_est * d @ d + 1e-15 * abs(ey):
                break
            L_est *= 2.0
        t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t_k * t_k))
        if en > e:  # restart momentum
            y = x_new.copy()
            t_k = 1.0
        else:
            y = x_new + ((t_k - 1.0) / t_next) * (x_new - u)
            t_k = t_next
        u, e, g = x_new, en, gn
        L_est *= 0.9
    return u, e, g, cfg.agd_max_iter, False


def solve_pinned(problem: PinnedProblem, cfg: SolverConfig = SolverConfig()) -> ExtremalSolution:
    params = problem.params
    p = params.p
    g0 = problem.grid()
    W = dense_weights(params, g0)
    i, j = problem.pinned_indices()
    free = np.ones(W.shape[0], dtype=bool)
    free[[i, j]] = False
    u = _initial(problem, cfg)
    a, b = problem.a, problem.b
    delta = cfg.delta * abs(a - b)
    if cfg.method == "newton":
        u, e, g, it, ok = _newton(u, W, p, free, delta, cfg)
    elif cfg.method == "agd":
        u, e, g, it, ok = _agd(u, W, p, free, min(a, b), max(a, b), cfg)
    else:
        raise DomainError(f"unknown solver method {cfg.method!r}")
    sol = problem.grid(u)
    holder, pair = holder_seminorm_grid(params.alpha, sol)
    node_w = _node_weights(sol)
    res = np.abs(g) / (p * node_w)
    return ExtremalSolution(
        u=sol,
        energy=float(e),
        holderSeminorm=holder,
        argmaxPair=pair,
        elResidualMax=float(np.max(res[free])),
        morreyEstimate=float(e / holder ** p),
        iterations=int(it),
        converged=bool(ok),
        gradient=g,
        pinned=(i, j),
    )


@dataclass(frozen=True)
class ELReport:
    freeMax: float  # max |(-Delta_p)^s u| over free nodes (gradient / (p * node weight))
    pinnedResiduals: tuple  # the same quantity at x0 and y0
    pinnedMasses: tuple  # gradient / p at x0 and y0: the two Dirac masses
    ratio: float  # mass(x0) / mass(y0), equal to -1 for a solution
    massNormalized: float  # |mass(x0)| / (m |a-b|^{p-1} / |x0-y0|^{sp-N})

    @property
    def relativeFree(self) -> float:
        return self.freeMax / max(abs(r) for r in self.pinnedResiduals)


def el_residual(params: FracParams, solution: ExtremalSolution, problem: PinnedProblem) -> ELReport:
    p = params.p
    i, j = problem.pinned_indices()
    g = solution.gradient
    w = _node_weights(solution.u)
    free = np.ones(g.size, dtype=bool)
    free[[i, j]] = False
    res = g / (p * w)
    mx, my = g[i] / p, g[j] / p
    d = problem.separation()
    ref = solution.morreyEstimate * abs(problem.a - problem.b) ** (p - 1.0) / d ** (params.sp - params.dim)
    return ELReport(
        freeMax=float(np.max(np.abs(res[free]))),
        pinnedResiduals=(float(res[i]), float(res[j])),
        pinnedMasses=(float(mx), float(my)),
        ratio=float(mx / my),
        massNormalized=float(abs(mx) / ref),
    )


def max_principle_violation(solution: ExtremalSolution, problem: PinnedProblem) -> float:
    """Largest excursion outside [min(a,b), max(a,b)], in units of |a - b|."""
    a, b = problem.a, problem.b
    v = solution.u.values
    over = max(float(np.max(v)) - max(a, b), min(a, b) - float(np.min(v)), 0.0)
    return over / abs(a - b)


def regularity_diagnostic(solution: ExtremalSolution, problem: PinnedProblem,
                          fraction: float = 0.9, radii=(0.4, 0.2, 0.1, 0.05)) -> dict:
    """Two-point ratios |u(x) - u(x0)| / |x - x0|^gamma near x0.

    gamma = fraction * (sp - N)/(p - 1).  Returns the maximum over each
    annulus r/2 <= |x - x0| <= r, scaled by the separation of the pins;
    bounded values as r shrinks indicate C^{0,gamma} behaviour at x0.
    """
    params = problem.params
    gamma = fraction * params.beta
    i, _ = problem.pinned_indices()
    pts = solution.u.points()
    d = np.sqrt(((pts - pts[i]) ** 2).sum(axis=1))
    v = np.abs(solution.u.values - solution.u.values[i])
    sep = problem.separation()
    out = {}
    for r in radii:
        m = (d >= 0.5 * r * sep) & (d <= r * sep) & (d > 0)
        out[float(r)] = float(np.max(v[m] / d[m] ** gamma)) if np.any(m) else math.nan
    return {"exponent": gamma, "ratios": out}


# ---------------------------------------------------------------------------
# Poincare constant Lambda_{s,p}(B_r)


@dataclass
class LambdaEstimate:
    value: float
    minimizer: GridFunction
    restarts: int
    spread: float
    values: tuple = ()
    multiBasin: bool = False
    method: str = "inverse"
    radius: float = 1.0


def centre_graded_nodes(radius: float = 1.0, beta: float = 0.5, h_max: float = 1.0 / 128.0,
                        ratio: float = 1.5, tail: float = 1e-3) -> np.ndarray:
    """Symmetric node set on [-radius, radius] graded geometrically toward 0.

    Minimisers behave like |x|^beta at the centre; the innermost cell
    x_min = tail^{1/beta} is small enough that the cell carries a fraction
    of about ``tail`` of the profile height, which matters when beta is
    close to 0.
    """
    x_min = max(1e-280, tail ** (1.0 / beta)) * radius
    step = h_max * radius
    pos = [x_min]
    while pos[-1] * (ratio - 1.0) < step and pos[-1] * ratio < radius:
        pos.append(pos[-1] * ratio)
    start = pos[-1]
    m = max(1, int(math.ceil((radius - start) / step)))
    pos.extend(start + (radius - start) * np.arange(1, m + 1) / m)
    pos = np.array(pos)
    pos[-1] = radius
    return np.concatenate([-pos[::-1], [0.0], pos])


def _ball_problem(params: FracParams, radius: float, n: int, graded: bool, **kw):
    """Nodes of B_radius(0), their regional weights and the L^p node weights."""
    N = params.dim
    if N == 1:
        if graded:
            x = centre_graded_nodes(radius, params.beta, **kw)
        else:
            x = np.linspace(-radius, radius, n if n % 2 else n + 1)
        grid = GridFunction.on_nodes(lambda t: np.zeros_like(t), x)
        W = _pair_weights(params.s, params.p, grid).data
        mass = _dual_cells(x)
        centre = int(np.argmin(np.abs(x)))
        return grid, np.ascontiguousarray(W), mass, np.arange(x.size), centre
    if N == 2:
        n = n if n % 2 else n + 1
        grid = GridFunction(2, radius, n, np.zeros(n * n))
        pts = grid.points()
        inside = np.flatnonzero((pts ** 2).sum(axis=1) <= radius * radius * (1.0 + 1e-12))
        W = _pair_weights(params.s, params.p, grid).dense()[np.ix_(inside, inside)]
        mass = np.full(inside.size, grid.h ** 2)
        centre = int(np.flatnonzero(inside == (n // 2) * n + n // 2)[0])
        return grid, np.ascontiguousarray(W), mass, inside, centre
    raise DomainError("Lambda estimates are computed in 1-D and 2-D")


def _rayleigh(v, W, p, mass):
    e = _kernels.dense_energy(v, W, p)
    return e / float(np.sum(mass * np.abs(v) ** p))


def _normalise(v, p, mass):
    return v / float(np.sum(mass * np.abs(v) ** p)) ** (1.0 / p)


def _inverse_power(v, W, p, mass, free, tol=1e-11, max_outer=400, max_newton=60, inner_tol=1e-11):
    """Inverse power iteration for the nonlinear eigenproblem.

    Each step solves  (1/p) grad E(w) = mass J_p(v)  on the free nodes (a
    convex problem, by Newton) and sets v = w / ||w||_p.  The Rayleigh
    quotient decreases monotonically along the iteration.
    """
    v = _normalise(v, p, mass)
    lam = _rayleigh(v, W, p, mass)
    for _ in range(max_outer):
        rhs = mass * np.abs(v) ** (p - 1.0) * np.sign(v)
        w = v * lam ** (-1.0 / (p - 1.0))
        for _ in range(max_newton):
            e, g = _kernels.dense_energy_grad(w, W, p)
            r = g / p - rhs
            r[~free] = 0.0
            if np.max(np.abs(r)) <= inner_tol * np.max(np.abs(rhs)):
                break
            H = _kernels.dense_hessian(w, W, p, 1e-12 * np.max(np.abs(w)))[np.ix_(free, free)] / p
            step = _capped(-_spd_solve(H, r[free]), 0.5 * np.max(np.abs(w)))
            phi0 = e / p - rhs @ w
            slope = float(r[free] @ step)
            t = 1.0
            ok = False
            while t > 1e-6:
                trial = w.copy()
                trial[free] += t * step
                phit = _kernels.dense_energy(trial, W, p) / p - rhs @ trial
                if phit <= phi0 + 1e-4 * t * slope:
                    ok = True
                    break
                t *= 0.5
            if not ok:
                break
            w = trial
        v = _normalise(w, p, mass)
        new = _rayleigh(v, W, p, mass)
        if abs(lam - new) <= tol * new:
            lam = min(lam, new)
            break
        lam = new
    return v, lam


def _descent(v, W, p, mass, free, tol=1e-10, max_iter=20000):
    """Normalised gradient descent on the L^p sphere.

    Meant for uniform meshes; on centre-graded meshes the stiffness spans
    too many decades for a first-order method and it stalls early.
    """
    v = _normalise(v, p, mass)
    lam = _rayleigh(v, W, p, mass)
    tau = 1.0 / float(np.max(W.sum(axis=1)) / np.min(mass))
    for _ in range(max_iter):
        e, g = _kernels.dense_energy_grad(v, W, p)
        # gradient of the Rayleigh quotient on the sphere, preconditioned by the mass
        grad = (g - p * lam * mass * np.abs(v) ** (p - 1.0) * np.sign(v)) / mass
        grad[~free] = 0.0
        while True:
            cand = _normalise(v - tau * grad, p, mass)
            new = _rayleigh(cand, W, p, mass)
            if new <= lam or tau < 1e-30:
                break
            tau *= 0.5
        v = cand
        done = lam - new <= tol * new
        lam = new
        tau *= 1.5
        if done:
            break
    return v, lam


def _random_start(pts: np.ndarray, beta: float, rng, odd: bool = False, modes: int = 4) -> np.ndarray:
    """|x|^beta times a random smooth positive amplitude (sign-flipped on x < 0 if ``odd``).

    Starts with the centre behaviour of minimisers avoid the huge energies
    of nodal noise on cells graded toward the centre.
    """
    rad = np.sqrt((pts ** 2).sum(axis=1))
    scale = max(float(rad.max()), 1e-300)
    amp = np.ones(rad.size)
    for k in range(1, modes + 1):
        for axis in range(pts.shape[1]):
            amp += 0.3 / k * rng.uniform(-1.0, 1.0) * np.cos(k * math.pi * pts[:, axis] / scale)
    amp = np.maximum(amp, 0.05)
    v = (rad / scale) ** beta * amp
    if odd:
        v *= np.where(pts[:, 0] < 0.0, -1.0, 1.0)
    return v


def lambda_estimate(params: FracParams, radius: float = 1.0, n: int = 257, restarts: int = 4,
                    seed: int = DEFAULT_SEED, method: str = "inverse", graded: bool = True,
                    **mesh) -> LambdaEstimate:
    """Upper-side estimate of Lambda_{s,p}(B_radius(0)).

    1-D problems use a node set graded toward the centre (``graded``),
    2-D problems the uniform grid restricted to the ball.  ``method`` is
    "inverse" (p = 2: the generalised symmetric eigenproblem; otherwise
    nonlinear inverse power iteration) or "descent" (normalised descent).
    Each restart draws a random start; the spread is max/min over restarts.
    """
    if params.local:
        raise DomainError("Lambda_{s,p} is defined for 0 < s < 1")
    if restarts < 1:
        raise DomainError("need at least one restart")
    p = params.p
    grid, W, mass, idx, c = _ball_problem(params, radius, n, graded and params.dim == 1, **mesh)
    m = W.shape[0]
    free = np.ones(m, dtype=bool)
    free[c] = False
    rng = np.random.default_rng(seed)
    vals, vecs = [], []
    if method == "inverse" and p == 2.0:
        rowsum = W.sum(axis=1)
        A = 2.0 * (np.diag(rowsum) - W)
        Af = A[np.ix_(free, free)]
        Mf = mass[free]
        # symmetric scaling keeps the pencil well conditioned on graded meshes
        sc = 1.0 / np.sqrt(Mf)
        B = Af * sc[:, None] * sc[None, :]
        for r in range(restarts):
            v0 = rng.uniform(0.5, 1.5, size=B.shape[0])
            lam, vec = eigsh(B, k=1, sigma=0.0, which="LM", v0=v0, tol=1e-13)
            v = np.zeros(m)
            v[free] = vec[:, 0] * sc
            vals.append(float(lam[0]))
            vecs.append(_normalise(v, p, mass))
    elif method in ("inverse", "descent"):
        pts = grid.points()[idx]
        for r in range(restarts):
            v = _random_start(pts, params.beta, rng)
            v[c] = 0.0
            if method == "inverse":
                v, lam = _inverse_power(v, W, p, mass, free)
            else:
                v, lam = _descent(v, W, p, mass, free)
            vals.append(float(lam))
            vecs.append(v)
    else:
        raise DomainError(f"unknown method {method!r}")
    k = int(np.argmin(vals))
    spread = max(vals) / min(vals)
    vals_full = np.zeros(grid.n if grid.dim == 1 else grid.n * grid.n)
    vals_full[idx] = vecs[k]
    return LambdaEstimate(
        value=vals[k],
        minimizer=grid.with_values(vals_full),
        restarts=restarts,
        spread=float(spread),
        values=tuple(vals),
        multiBasin=bool(spread > 1.5),
        method=method,
        radius=radius,
    )


def morrey_lower_bound(params: FracParams, lambdaEst: LambdaEstimate) -> float:
    """theta_{N,s,p} * Lambda_{s,p}(B_1)."""
    lam = lambdaEst.value * lambdaEst.radius ** params.sp  # rescale to the unit ball
    return theta_constant(params).value * lam


@dataclass(frozen=True)
class PointwiseReport:
    nodes: int
    violations: int
    worstRatio: float  # max |u(x)| / bound(x)


def pointwise_bound_check(params: FracParams, lambdaEst: LambdaEstimate, u: GridFunction,
                          x0, r: float, slack: float = 0.2) -> PointwiseReport:
    """Check |u(x)| <= (omega_N Lam)^{-1/p} ((r-d)^s + r^s)/(r-d)^{N/p} [u]_{W^{s,p}(B_r(x0))}.

    d = |x - x0|, Lam = Lambda(B_1) / (1 + slack), over all nodes of the open ball.
    """
    N, s, p = params.dim, params.s, params.p
    pts = u.points()
    c = np.broadcast_to(np.asarray(x0, dtype=float), (N,))
    d = np.sqrt(((pts - c) ** 2).sum(axis=1))
    k0 = int(np.argmin(d))
    if d[k0] > 1e-9 * max(u.L, 1.0) or abs(u.values[k0]) > 1e-12 * max(1.0, np.max(np.abs(u.values))):
        raise DomainError("u must vanish at the centre node x0")
    lam1 = lambdaEst.value * lambdaEst.radius ** params.sp / (1.0 + slack)
    semi = local_gagliardo_grid(params, u, c, r).value
    inside = d < r
    delta = r - d[inside]
    bound = (unit_ball_volume(N) * lam1) ** (-1.0 / p) * (delta ** s + r ** s) / delta ** (N / p) * semi
    lhs = np.abs(u.values[inside])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(bound > 0, lhs / bound, np.where(lhs > 0, np.inf, 0.0))
    return PointwiseReport(int(inside.sum()), int(np.sum(ratio > 1.0 + 1e-12)), float(np.max(ratio)))
