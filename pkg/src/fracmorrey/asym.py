"""Asymptotic sweeps: s down to N/p, p to infinity and s up to 1.

Each sweep point is independent; with ``workers > 1`` points run in a
process pool and results are assembled in grid order, so the output does not
depend on the degree of parallelism.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .extremal import (
    DEFAULT_SEED,
    PinnedProblem,
    SolverConfig,
    lambda_estimate,
    morrey_lower_bound,
    solve_pinned,
)
from .params import DomainError, FracParams, bbm_constant
from .quadrature import GridFunction, gagliardo_grid
from .trial import TrialFunction, morrey_upper_bound

S_TO_BOUNDARY = "sDownToNOverP"
P_TO_INFINITY = "pToInfinity"
S_TO_ONE = "sUpToOne"
JOINT = "jointLimit"
SANDWICH_SLACK = 0.15


@dataclass(frozen=True)
class SweepRecord:
    regime: str
    abscissa: float
    lower: float
    upper: float
    extremalEstimate: Optional[float]
    normalized: float
    flags: tuple = ()

    def __post_init__(self):
        if not self.sandwich_holds() and "sandwichViolated" not in self.flags:
            object.__setattr__(self, "flags", self.flags + ("sandwichViolated",))

    def sandwich_holds(self) -> bool:
        if self.extremalEstimate is None:
            return self.lower <= self.upper * (1.0 + SANDWICH_SLACK)
        m = self.extremalEstimate
        return self.lower <= m * (1.0 + SANDWICH_SLACK) and m * (1.0 + SANDWICH_SLACK) <= self.upper * 1.3


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    rSquared: float
    pointsUsed: int


def fit_rate(x, y, window: str = "belowMedian") -> RateFit:
    """OLS fit of log y on log x.

    ``window='belowMedian'`` keeps the points with x below the median of x
    (at least the three smallest); ``'all'`` keeps everything.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 3:
        raise DomainError("a rate fit needs at least three points")
    if window == "belowMedian":
        keep = x < np.median(x)
        if keep.sum() < 3:
            keep = np.zeros(x.size, dtype=bool)
            keep[np.argsort(x)[:3]] = True
    elif window == "all":
        keep = np.ones(x.size, dtype=bool)
    else:
        raise DomainError(f"unknown fit window {window!r}")
    lx, ly = np.log(x[keep]), np.log(y[keep])
    A = np.column_stack([lx, np.ones_like(lx)])
    (slope, icpt), *_ = np.linalg.lstsq(A, ly, rcond=None)
    pred = A @ np.array([slope, icpt])
    ss_res = float(np.sum((ly - pred) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return RateFit(float(slope), float(icpt), r2, int(keep.sum()))


def _map(fn, items, workers: int):
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# s down to N/p


@dataclass(frozen=True)
class _BoundaryPoint:
    dim: int
    s: float
    p: float
    restarts: int
    seed: int
    extremal: bool
    n: int
    L: float


def _boundary_point(pt: _BoundaryPoint) -> SweepRecord:
    prm = FracParams(pt.dim, pt.s, pt.p)
    lam = lambda_estimate(prm, restarts=pt.restarts, seed=pt.seed)
    lower = morrey_lower_bound(prm, lam)
    upper = morrey_upper_bound(prm, TrialFunction.zeta(prm)).bound
    ext = None
    flags = ("multiBasin",) if lam.multiBasin else ()
    if pt.extremal:
        sol = solve_pinned(PinnedProblem(prm, pt.L, pt.n, 0.0, 1.0))
        ext = sol.morreyEstimate
        if not sol.converged:
            flags += ("notConverged",)
    gap = prm.sp - prm.dim
    return SweepRecord(S_TO_BOUNDARY, gap, lower, upper, ext, upper / gap ** (prm.p - 1.0), flags)


def sweep_s_to_boundary(dim: int, p: float, sGrid, restarts: int = 2, seed: int = DEFAULT_SEED,
                        extremal: bool = False, n: int = 1025, L: float = 4.0, workers: int = 1):
    """Lower (theta Lambda) and upper (zeta) bounds along s -> N/p.

    The abscissa is sp - N and ``normalized`` is upper / (sp - N)^{p-1}.
    Returns the records in abscissa order and the two rate fits.
    """
    sGrid = [float(s) for s in sGrid]
    if len(sGrid) < 4:
        raise DomainError("the boundary sweep needs at least four grid points")
    gaps = [s * p - dim for s in sGrid]
    if min(gaps) <= 0:
        raise DomainError("every s must satisfy s p > N")
    pts = [_BoundaryPoint(dim, s, float(p), restarts, seed, extremal, n, L) for s in sGrid]
    recs = sorted(_map(_boundary_point, pts, workers), key=lambda r: r.abscissa)
    x = [r.abscissa for r in recs]
    fl = fit_rate(x, [r.lower for r in recs])
    fu = fit_rate(x, [r.upper for r in recs])
    for name, f in (("lower", fl), ("upper", fu)):
        if f.rSquared < 0.9:
            warnings.warn(f"{name} rate fit has rSquared = {f.rSquared:.3f} < 0.9")
    return recs, fl, fu


# ---------------------------------------------------------------------------
# p to infinity


@dataclass(frozen=True)
class _PPoint:
    dim: int
    s: float
    p: float
    eps: float
    restarts: int
    seed: int


def _p_point(pt: _PPoint) -> SweepRecord:
    prm = FracParams(pt.dim, pt.s, pt.p)
    lam = lambda_estimate(prm, restarts=pt.restarts, seed=pt.seed)
    lower = morrey_lower_bound(prm, lam)
    upper = morrey_upper_bound(prm, TrialFunction.smooth_cone(prm, pt.eps)).bound
    flags = ("multiBasin",) if lam.multiBasin else ()
    return SweepRecord(P_TO_INFINITY, prm.p, lower, upper, None, upper ** (1.0 / prm.p), flags)


def sweep_p_to_infinity(dim: int, s: float, pGrid, eps: float = 0.1, restarts: int = 2,
                        seed: int = DEFAULT_SEED, workers: int = 1) -> list:
    """theta Lambda and the smoothed-cone bound along increasing p.

    ``normalized`` is upper^{1/p}; both p-th roots should approach 1.
    """
    pGrid = sorted(float(p) for p in pGrid)
    if s * pGrid[0] <= dim:
        raise DomainError("need s * min(p) > N")
    pts = [_PPoint(dim, float(s), p, float(eps), restarts, seed) for p in pGrid]
    return _map(_p_point, pts, workers)


@dataclass(frozen=True)
class RootTrend:
    lowerRoots: tuple
    upperRoots: tuple

    @property
    def lowerShrinking(self) -> bool:
        d = [abs(v - 1.0) for v in self.lowerRoots[-2:]]
        return d[1] <= d[0]

    @property
    def upperShrinking(self) -> bool:
        d = [abs(v - 1.0) for v in self.upperRoots[-2:]]
        return d[1] <= d[0]


def root_trend(records) -> RootTrend:
    return RootTrend(tuple(r.lower ** (1.0 / r.abscissa) for r in records),
                     tuple(r.upper ** (1.0 / r.abscissa) for r in records))


# ---------------------------------------------------------------------------
# s up to 1


@dataclass(frozen=True)
class _OnePoint:
    dim: int
    s: float
    p: float
    n: int
    L: float
    restarts: int
    seed: int


def _one_point(pt: _OnePoint):
    prm = FracParams(pt.dim, pt.s, pt.p)
    problem = PinnedProblem(prm, pt.L, pt.n, 0.0, 1.0)
    sol = solve_pinned(problem)
    lam = lambda_estimate(prm, restarts=pt.restarts, seed=pt.seed)
    lower = morrey_lower_bound(prm, lam)
    upper = morrey_upper_bound(prm, TrialFunction.zeta(prm)).bound
    flags = () if sol.converged else ("notConverged",)
    rec = SweepRecord(S_TO_ONE, prm.s, lower, upper, sol.morreyEstimate,
                      (1.0 - prm.s) * sol.morreyEstimate, flags)
    return rec, sol.u.values


@dataclass
class SToOneResult:
    records: list
    target: float  # K_{p,N} m_{1,p}
    bbmRatio: float  # (1-s)[phi]^p_{W^{s,p}} / (K [phi]^p_{W^{1,p}}) at the last s
    supDistance: float  # max over [x0, y0] of |u_s - u_1| at the last s, in units of |a-b|
    localSolution: np.ndarray = field(repr=False, default=None)


def gradient_energy_grid(u: GridFunction, p: float) -> float:
    """sum over cells of h |(u_{i+1} - u_i)/h|^p (1-D, zero exterior)."""
    if u.dim != 1:
        raise DomainError("the grid gradient energy is 1-D")
    v = np.concatenate([[0.0], u.values, [0.0]])
    h = u.h
    return math.fsum(h * np.abs(np.diff(v) / h) ** p)


def bbm_ratio(params: FracParams, bump: GridFunction) -> float:
    """(1-s)[phi]^p_{W^{s,p}} / (K_{p,N} [phi]^p_{W^{1,p}}) on a grid function."""
    frac = gagliardo_grid(params, bump).raisedToP
    return (1.0 - params.s) * frac / (bbm_constant(params) * gradient_energy_grid(bump, params.p))


def default_reference_bump(L: float = 1.5, n: int = 4097) -> GridFunction:
    """phi(x) = (1 - x^2)_+^2 sampled on [-L, L]."""
    return GridFunction.sample(lambda x: np.clip(1.0 - x * x, 0.0, None) ** 2, 1, L, n)


def sweep_s_to_one(dim: int, p: float, sGrid, referenceBump: Optional[GridFunction] = None,
                   n: int = 2049, L: float = 4.0, restarts: int = 2, seed: int = DEFAULT_SEED,
                   workers: int = 1) -> SToOneResult:
    """(1-s) m_{s,p} from pinned solves as s -> 1, plus the BBM seminorm check.

    ``normalized`` is (1-s) * morreyEstimate; the target is K_{p,N}, which
    equals 2/p for N = 1 where m_{1,p}(R) = 1.
    """
    if dim != 1:
        raise DomainError("the s -> 1 sweep is calibrated in 1-D, where m_{1,p} = 1")
    sGrid = sorted(float(s) for s in sGrid)
    if sGrid[-1] > 0.99:
        raise DomainError("the s -> 1 sweep is capped at s = 0.99")
    if n > 4097:
        raise DomainError("the s -> 1 sweep is capped at n = 4097")
    pts = [_OnePoint(dim, s, float(p), n, L, restarts, seed) for s in sGrid]
    out = _map(_one_point, pts, workers)
    recs = [r for r, _ in out]
    last = out[-1][1]
    local = solve_pinned(PinnedProblem(FracParams(dim, 1.0, p), L, n, 0.0, 1.0))
    x = local.u.axis()
    m = (x >= 0.0) & (x <= 1.0)
    sup = float(np.max(np.abs(last - local.u.values)[m]))
    target = bbm_constant(FracParams(dim, sGrid[-1], p))
    if referenceBump is None:
        referenceBump = default_reference_bump()
    ratio = bbm_ratio(FracParams(dim, sGrid[-1], p), referenceBump)
    return SToOneResult(recs, target, ratio, sup, local.u.values)


# ---------------------------------------------------------------------------
# joint limit (exploratory)


def sweep_joint(dim: int, sGrid, excess: float = 0.5, restarts: int = 2, seed: int = DEFAULT_SEED,
                workers: int = 1) -> list:
    """Exploratory sweep along p = N (1 + excess) / s for s -> 0.

    Then sp - N = N * excess stays fixed while p grows.  No prediction is
    attached; the records carry theta Lambda and the zeta bound.
    """
    pts = []
    for s in sorted((float(s) for s in sGrid), reverse=True):
        p = dim * (1.0 + excess) / s
        pts.append(_BoundaryPoint(dim, s, p, restarts, seed, False, 0, 0.0))
    recs = _map(_boundary_point, pts, workers)
    return [SweepRecord(JOINT, pt.s, r.lower, r.upper, None, r.upper ** (1.0 / pt.p), r.flags)
            for pt, r in zip(pts, recs)]
