"""Gagliardo seminorms of radial profiles and of grid functions.

Two independent routes are provided:

* ``gagliardo_radial`` reduces [u]^p_{W^{s,p}(R^N)} of a radial, compactly
  supported profile to iterated one-dimensional integrals against the kernel
  Phi, split into an inside-inside part and an inside-outside tail.
* ``gagliardo_grid`` evaluates a weighted pair sum over the nodes of a grid
  function.  Pairs at distance >= 2h use midpoint weights, while the band
  |x - y| < 3h/2 is integrated exactly for piecewise linear data and
  carried by the nearest-neighbour weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy import integrate, special

from . import _kernels
from .params import (
    DomainError,
    FracParams,
    NumericFailure,
    _angular_integral,
    _phi_closed_1d,
    phi_singular_coefficient,
    sphere_measure,
)

BAND = 1.5  # half-width, in cells, of the band carried by the adjacent weights
OVERFLOW_GUARD = 1e300
MAX_2D_NODES = 257


# ---------------------------------------------------------------------------
# data carriers


@dataclass
class RadialProfile:
    """Radial profile u(|x|) supported in the closed ball of radius R.

    ``power_cap = (c, beta)`` declares u(r) = c (1 - (r/R)^beta) on [0, R],
    which enables an exact factorisation of the inside-inside integral.
    """

    profile: Callable
    R: float
    holder: Optional[float] = None
    derivative: Optional[Callable] = None
    breakpoints: tuple = ()
    power_cap: Optional[tuple] = None

    def __post_init__(self):
        if not self.R > 0:
            raise DomainError("support radius must be positive")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = np.where(r < self.R, self.profile(np.minimum(r, self.R)), 0.0)
        return out

    def slope(self, r):
        if self.derivative is not None:
            return np.asarray(self.derivative(r), dtype=float)
        d = 1e-6 * self.R
        r = np.asarray(r, dtype=float)
        lo = np.maximum(r - d, 0.0)
        hi = np.minimum(r + d, self.R)
        return (self.profile(hi) - self.profile(lo)) / (hi - lo)


@dataclass
class GridFunction:
    """Nodal values on a box grid of half-width L centred at ``origin``.

    Uniform grids have nodes origin - L + i*h with h = 2L/(n-1).  In 1-D a
    graded node set may be supplied through ``coords`` instead; then L is
    the largest distance from the origin and h is undefined.  2-D values are
    stored row-major: value k sits at (x_i, y_j) with k = i*n + j.
    """

    dim: int
    L: float
    n: int
    values: np.ndarray
    coords: Optional[np.ndarray] = None
    origin: tuple = field(default=0.0)

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise DomainError("grid functions are 1-D or 2-D")
        if self.n < 3:
            raise DomainError(f"need at least 3 nodes per axis, got n={self.n}")
        self.values = np.ascontiguousarray(self.values, dtype=float)
        size = self.n if self.dim == 1 else self.n * self.n
        if self.values.shape != (size,):
            raise DomainError(f"expected {size} values, got shape {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("grid values must be finite")
        if self.coords is not None:
            if self.dim != 1:
                raise DomainError("graded node sets are 1-D only")
            self.coords = np.ascontiguousarray(self.coords, dtype=float)
            if self.coords.shape != (self.n,) or np.any(np.diff(self.coords) <= 0):
                raise DomainError("graded coordinates must be strictly increasing, length n")
        if self.dim == 1:
            self.origin = float(np.asarray(self.origin, dtype=float).reshape(-1)[0])
        else:
            o = np.broadcast_to(np.asarray(self.origin, dtype=float), (2,))
            self.origin = (float(o[0]), float(o[1]))

    @property
    def uniform(self) -> bool:
        return self.coords is None

    @property
    def h(self) -> float:
        if not self.uniform:
            raise DomainError("graded grids have no single spacing")
        return 2.0 * self.L / (self.n - 1)

    def axis(self, k: int = 0) -> np.ndarray:
        if not self.uniform:
            return self.coords.copy()
        o = self.origin if self.dim == 1 else self.origin[k]
        return o - self.L + self.h * np.arange(self.n)

    def points(self) -> np.ndarray:
        """Node coordinates as an (M, dim) array in value order."""
        if self.dim == 1:
            return self.axis()[:, None]
        X, Y = np.meshgrid(self.axis(0), self.axis(1), indexing="ij")
        return np.column_stack([X.ravel(), Y.ravel()])

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.dim, self.L, self.n, np.asarray(values, dtype=float),
                            self.coords, self.origin)

    @classmethod
    def sample(cls, f, dim: int, L: float, n: int, origin=0.0) -> "GridFunction":
        g = cls(dim, L, n, np.zeros(n if dim == 1 else n * n), origin=origin)
        if dim == 1:
            vals = f(g.axis())
        else:
            X, Y = np.meshgrid(g.axis(0), g.axis(1), indexing="ij")
            vals = f(X, Y)
        return g.with_values(np.asarray(vals, dtype=float).ravel())

    @classmethod
    def on_nodes(cls, f, coords, origin=0.0) -> "GridFunction":
        coords = np.asarray(coords, dtype=float)
        L = float(np.max(np.abs(coords - origin)))
        return cls(1, L, coords.size, np.asarray(f(coords), dtype=float), coords, origin)


@dataclass(frozen=True)
class SeminormResult:
    value: float
    raisedToP: float
    method: str
    estimatedError: float


def _result(raised: float, p: float, method: str, err: float) -> SeminormResult:
    if not math.isfinite(raised) or raised > OVERFLOW_GUARD:
        raise NumericFailure(f"seminorm estimate diverged ({raised!r})")
    raised = max(raised, 0.0)
    return SeminormResult(raised ** (1.0 / p), raised, method, float(err))


# ---------------------------------------------------------------------------
# pair weights


def adjacent_coefficient(s: float, p: float) -> float:
    """Band integral int_0^{3/2} t^{p-1-sp} dt, the 1-D adjacent weight / h^{1-sp}."""
    a = p * (1.0 - s)
    return BAND ** a / a


@lru_cache(maxsize=256)
def axis_coefficient_2d(s: float, p: float) -> float:
    """2-D nearest-neighbour weight / h^{2-sp}.

    The square band [-3/2, 3/2]^2 is integrated exactly against linear data
    and the result assigned to the four axis neighbours; for p = 2 this is
    exact in every gradient direction, otherwise exact on average over them.
    """
    a = p * (1.0 - s)
    val, _ = integrate.quad(lambda th: (BAND / math.cos(th)) ** a, 0.0, math.pi / 4.0,
                            epsabs=0.0, epsrel=1e-13)
    return 2.0 * val / a


def _toeplitz_weights(s: float, p: float, n: int, h: float) -> np.ndarray:
    w = np.zeros(n)
    if s == 1.0:
        w[1] = 0.5 * h ** (1.0 - p)
        return w
    sp = s * p
    m = np.arange(2, n, dtype=float)
    w[2:] = h ** (1.0 - sp) * m ** (-(1.0 + sp))
    w[1] = h ** (1.0 - sp) * adjacent_coefficient(s, p)
    return w


def _dual_cells(x: np.ndarray) -> np.ndarray:
    d = np.empty_like(x)
    d[1:-1] = 0.5 * (x[2:] - x[:-2])
    d[0] = 0.5 * (x[1] - x[0])
    d[-1] = 0.5 * (x[-1] - x[-2])
    return d


def _graded_weights(s: float, p: float, x: np.ndarray) -> np.ndarray:
    n = x.size
    W = np.zeros((n, n))
    ell = np.diff(x)
    if s == 1.0:
        wadj = 0.5 * ell ** (1.0 - p)
    else:
        sp = s * p
        logd = np.log(_dual_cells(x))
        with np.errstate(divide="ignore"):
            logr = np.log(np.abs(x[:, None] - x[None, :]))
        W = np.exp(logd[:, None] + logd[None, :] - (1.0 + sp) * logr)
        np.fill_diagonal(W, 0.0)
        wadj = adjacent_coefficient(s, p) * ell ** (1.0 - sp)
    idx = np.arange(n - 1)
    W[idx, idx + 1] = wadj
    W[idx + 1, idx] = wadj
    return W


def _lattice_table_2d(s: float, p: float, n: int, h: float) -> np.ndarray:
    k = np.arange(-(n - 1), n, dtype=float)
    KX, KY = np.meshgrid(k, k, indexing="ij")
    r2 = KX * KX + KY * KY
    c = n - 1
    table = np.zeros_like(r2)
    if s == 1.0:
        wax = 0.5 * h ** (2.0 - p)
    else:
        sp = s * p
        far = np.maximum(np.abs(KX), np.abs(KY)) >= 2
        table[far] = h ** (2.0 - sp) * r2[far] ** (-(2.0 + sp) / 2.0)
        wax = h ** (2.0 - sp) * axis_coefficient_2d(s, p)
    for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        table[c + dx, c + dy] = wax
    return table


@dataclass
class PairWeights:
    """Weights w_ij of the discrete energy sum_{i != j} w_ij |u_i - u_j|^p."""

    kind: str  # "toeplitz" (uniform 1-D), "graded" (1-D) or "lattice" (2-D)
    s: float
    p: float
    n: int
    data: np.ndarray

    def dense(self) -> np.ndarray:
        if self.kind == "toeplitz":
            i = np.arange(self.n)
            return self.data[np.abs(i[:, None] - i[None, :])]
        if self.kind == "graded":
            return self.data
        n = self.n
        ix, iy = np.divmod(np.arange(n * n), n)
        return self.data[ix[None, :] - ix[:, None] + n - 1, iy[None, :] - iy[:, None] + n - 1]


def pair_weights(params: FracParams, grid: GridFunction) -> PairWeights:
    return _pair_weights(params.s, params.p, grid)


def _pair_weights(s: float, p: float, grid: GridFunction) -> PairWeights:
    if grid.dim == 1 and not grid.uniform:
        return PairWeights("graded", s, p, grid.n, _graded_weights(s, p, grid.coords))
    if grid.dim == 1:
        return PairWeights("toeplitz", s, p, grid.n, _toeplitz_weights(s, p, grid.n, grid.h))
    return PairWeights("lattice", s, p, grid.n, _lattice_table_2d(s, p, grid.n, grid.h))


def _lattice_total_2d(s: float, p: float, h: float) -> float:
    """Sum of the 2-D lattice weights over all offsets k != 0."""
    sp = s * p
    sig = 1.0 + 0.5 * sp
    dbeta = 4.0 ** (-sig) * (special.zeta(sig, 0.25) - special.zeta(sig, 0.75))
    epstein = 4.0 * special.zeta(sig, 1.0) * dbeta
    near = 4.0 + 4.0 * 2.0 ** (-sig)
    return h ** (2.0 - sp) * (epstein - near + 4.0 * axis_coefficient_2d(s, p))


def _column_remainder(a: np.ndarray, K: int, sig: float) -> np.ndarray:
    """sum_{b > K} (a^2 + b^2)^{-sig} by Euler-Maclaurin (K >> sig)."""
    a = np.asarray(a, dtype=float)
    fK = (a * a + K * K) ** (-sig)
    dK = -2.0 * sig * K * (a * a + K * K) ** (-sig - 1.0)
    integral = np.empty_like(a)
    zero = a == 0.0
    integral[zero] = K ** (1.0 - 2.0 * sig) / (2.0 * sig - 1.0)
    az = a[~zero]
    x2 = 1.0 / (1.0 + (K / az) ** 2)
    integral[~zero] = az ** (1.0 - 2.0 * sig) * 0.5 * special.beta(sig - 0.5, 0.5) * \
        special.betainc(sig - 0.5, 0.5, x2)
    return integral - 0.5 * fK - dK / 12.0


def _lattice_tail_2d(s: float, p: float, n: int, h: float) -> np.ndarray:
    """Per-node sum of 2-D lattice weights to nodes outside the box.

    The exterior of the box splits into two half-planes left and right of it
    and two strips above and below it.  Each piece is a sum of positive
    column sums, so no cancellation against the full lattice total occurs
    (that difference loses everything once h^{2-sp} is large).
    """
    sp = s * p
    sig = 1.0 + 0.5 * sp
    K = max(4 * n, int(40 * sig), 256)
    a = np.arange(K + 1, dtype=float)
    A, B = np.meshgrid(a, a, indexing="ij")
    with np.errstate(divide="ignore"):
        U = (A * A + B * B) ** (-sig)
    U[0, 0] = 0.0
    U[1, 1] = 0.0
    U[1, 0] = U[0, 1] = axis_coefficient_2d(s, p)
    # P[a, b] = sum_{b' >= b} U[a, b'] over b' in Z_{>= b}
    P = np.cumsum(U[:, ::-1], axis=1)[:, ::-1] + _column_remainder(a, K, sig)[:, None]
    C = U[:, 0] + 2.0 * P[:, 1]
    cs = 0.5 * math.sqrt(math.pi) * special.gamma(sig - 0.5) / special.gamma(sig) * 2.0
    beyond = cs * special.zeta(2.0 * sig - 1.0, K + 1.0)  # Bessel corrections are negligible
    SC = np.cumsum(C[::-1])[::-1] + beyond  # SC[A] = sum_{a >= A} C[a]
    Q = np.cumsum(P[1:n + 1, :], axis=0)  # Q[m-1, b] = sum_{a=1}^{m} P[a, b]
    i = np.arange(n)
    side = SC[n - i] + SC[i + 1]  # half-planes, depends on the row index i

    def strip(b):
        # sum over kx in [-i, n-1-i] of P[|kx|, b], for every i
        out = P[0, b][None, :] + np.zeros((n, 1))
        lo = i[:, None]
        hi = (n - 1 - i)[:, None]
        q = np.vstack([np.zeros((1, b.size)), Q[:, b]])
        return out + q[lo.ravel()] + q[hi.ravel()]

    j = np.arange(n)
    tail = side[:, None] + strip(n - j) + strip(j + 1)
    return h ** (2.0 - sp) * tail.ravel()


def _tail_weights_1d(s: float, p: float, n: int, h: float) -> np.ndarray:
    """Per-node sum of lattice weights to nodes outside the box."""
    sp = s * p
    i = np.arange(n)

    def side(a):
        a = a.astype(float)
        t = special.zeta(1.0 + sp, np.maximum(a, 2.0))
        return np.where(a == 1.0, adjacent_coefficient(s, p) + special.zeta(1.0 + sp, 2.0), t)

    return h ** (1.0 - sp) * (side(n - i) + side(i + 1))


# ---------------------------------------------------------------------------
# grid seminorms


def _grid_energy(s: float, p: float, u: GridFunction, exterior: str = "zero",
                 allow_large: bool = False, weights: PairWeights | None = None) -> float:
    if not (0.0 < s < 1.0):
        raise DomainError("grid seminorms need 0 < s < 1 (use the gradient energy for s = 1)")
    if exterior not in ("zero", "none"):
        raise DomainError("exterior must be 'zero' or 'none'")
    v = u.values
    if u.dim == 1 and not u.uniform:
        if exterior != "none":
            raise DomainError("graded grids carry regional energies only (exterior='none')")
        W = (weights or _pair_weights(s, p, u)).data
        return float(_kernels.dense_energy(v, W, p))
    if u.dim == 1:
        w = (weights or _pair_weights(s, p, u)).data
        e = float(_kernels.toeplitz_energy(v, w, p))
        if exterior == "zero":
            tail = _tail_weights_1d(s, p, u.n, u.h)
            e += 2.0 * math.fsum(np.abs(v) ** p * tail)
        return e
    if u.n > MAX_2D_NODES and not allow_large:
        raise DomainError(f"2-D pair sums are capped at n <= {MAX_2D_NODES} (pass allow_large=True)")
    table = (weights or _pair_weights(s, p, u)).data
    ix, iy = np.divmod(np.arange(u.n * u.n), u.n)
    e, rows = _kernels.lattice_energy_2d(ix, iy, v, table, u.n, p)
    if exterior == "zero":
        tail = _lattice_tail_2d(s, p, u.n, u.h)
        e += 2.0 * math.fsum(np.abs(v) ** p * tail)
    return float(e)


def gagliardo_grid(params: FracParams, u: GridFunction, exterior: str = "zero",
                   allow_large: bool = False) -> SeminormResult:
    """Discrete [u]^p_{W^{s,p}} of a grid function.

    ``exterior='zero'`` treats u as extended by zero on the infinite lattice
    (the tail sums are evaluated in closed form), giving a discretisation of
    the seminorm over R^N; ``exterior='none'`` keeps only pairs inside the box.
    """
    e = _grid_energy(params.s, params.p, u, exterior, allow_large)
    return _result(e, params.p, "pairSum", 0.0)


def _ball_mask(u: GridFunction, center, radius: float) -> np.ndarray:
    pts = u.points()
    c = np.broadcast_to(np.asarray(center, dtype=float), (u.dim,))
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    tol = 1e-12 * max(1.0, u.L)
    if np.any(c - radius < lo - tol) or np.any(c + radius > hi + tol):
        raise DomainError("ball escapes the grid box")
    d = np.sqrt(((pts - c) ** 2).sum(axis=1))
    return d <= radius * (1.0 + 1e-12) + 1e-15


def local_gagliardo_grid(params: FracParams, u: GridFunction, center, radius: float) -> SeminormResult:
    """Pair sum restricted to nodes in the closed ball B_radius(center)."""
    mask = _ball_mask(u, center, radius)
    idx = np.flatnonzero(mask)
    if idx.size < 2:
        return _result(0.0, params.p, "pairSum", 0.0)
    s, p = params.s, params.p
    if u.dim == 1:
        W = _pair_weights(s, p, u).dense()[np.ix_(idx, idx)]
        e = float(_kernels.dense_energy(u.values[idx], np.ascontiguousarray(W), p))
    else:
        table = _pair_weights(s, p, u).data
        ix, iy = np.divmod(idx, u.n)
        e, _ = _kernels.lattice_energy_2d(ix, iy, u.values[idx], table, u.n, p)
    return _result(float(e), p, "pairSum", 0.0)


def holder_seminorm_grid(alpha: float, u: GridFunction):
    """Max over node pairs of |u_i - u_j| / |x_i - x_j|^alpha and its argmax.

    Returns ``(value, (i, j))`` with i < j; a constant function gives
    ``(0.0, (-1, -1))``.
    """
    if not (0.0 < alpha <= 1.0):
        raise DomainError("alpha must lie in (0, 1]")
    val, i, j = _kernels.holder_max(np.ascontiguousarray(u.points()), u.values, float(alpha))
    return float(val), (int(i), int(j))


def difference_quotient_sup(params: FracParams, u: GridFunction, hSet) -> float:
    """max over shifts of sum_i h^N |u(x_i + shift) - u(x_i)|^p / |shift|^{sp}.

    u is extended by zero outside the box.  Scalar shifts act along the first
    axis; 2-D shifts may also be given as pairs.
    """
    h = u.h
    N, sp, p = u.dim, params.sp, params.p
    best = 0.0
    for shift in hSet:
        vec = np.broadcast_to(np.asarray(shift, dtype=float), (N,)) if np.ndim(shift) else \
            np.array([float(shift)] + [0.0] * (N - 1))
        k = np.rint(vec / h)
        if np.any(np.abs(k * h - vec) > 1e-9 * h) or not np.any(k):
            raise DomainError(f"shift {shift!r} is not a non-zero multiple of h = {h!r}")
        k = k.astype(int)
        pad = int(np.abs(k).max())
        if N == 1:
            big = np.zeros(u.n + 2 * pad)
            big[pad:pad + u.n] = u.values
            diff = np.roll(big, -k[0]) - big
        else:
            big = np.zeros((u.n + 2 * pad, u.n + 2 * pad))
            big[pad:pad + u.n, pad:pad + u.n] = u.values.reshape(u.n, u.n)
            diff = np.roll(big, (-k[0], -k[1]), axis=(0, 1)) - big
        total = math.fsum((h ** N) * np.abs(diff.ravel()) ** p)
        best = max(best, total / float(np.linalg.norm(vec)) ** sp)
    return best


def seminorm_p_limit(beta: float, u: GridFunction, pList) -> list:
    """[u]_{W^{beta,p}} (zero extension) for each p in ``pList``."""
    return [_grid_energy(beta, float(p), u, "zero") ** (1.0 / float(p)) for p in pList]


# ---------------------------------------------------------------------------
# radial route

_GL_NODES = 16
_EPS_BAND = 1e-4


@lru_cache(maxsize=16)
def _t_rule(eps: float):
    """Composite Gauss-Legendre rule on [0, 1 - eps], graded at both ends.

    Returns nodes t, 1 - t (computed without cancellation) and weights.
    """
    xi, wi = np.polynomial.legendre.leggauss(_GL_NODES)
    xi = 0.5 * (xi + 1.0)
    wi = 0.5 * wi
    ts, omts, ws = [], [], []
    low = [0.0] + [2.0 ** (-k) for k in range(40, 0, -1)]  # edges in t up to 1/2
    for a, b in zip(low[:-1], low[1:]):
        t = a + (b - a) * xi
        ts.append(t)
        omts.append(1.0 - t)
        ws.append((b - a) * wi)
    kmax = int(math.ceil(math.log2(1.0 / eps)))
    high = [2.0 ** (-k) for k in range(1, kmax)] + [eps]  # edges in 1 - t
    for a, b in zip(high[:-1], high[1:]):
        omt = a + (b - a) * xi
        omts.append(omt)
        ts.append(1.0 - omt)
        ws.append((a - b) * wi)
    return np.concatenate(ts), np.concatenate(omts), np.concatenate(ws)


@lru_cache(maxsize=64)
def _phi_on_rule(dim: int, sp: float, eps: float) -> np.ndarray:
    t, omt, _ = _t_rule(eps)
    if dim == 1:
        return _phi_closed_1d(sp, t, omt)
    return np.array([_angular_integral(dim, sp, o * o, ti)[0] for ti, o in zip(t, omt)])


def _exterior_kernel(dim: int, sp: float, rho: float, R: float) -> float:
    """int_{|y| > R} |x - y|^{-N-sp} dy for |x| = rho < R."""
    if dim == 1:
        return ((R - rho) ** (-sp) + (R + rho) ** (-sp)) / sp
    k = dim - 2
    gap = R * R - rho * rho

    def f(ph):
        c = math.cos(ph)
        sn = math.sin(ph)
        root = math.sqrt(R * R - rho * rho * sn * sn)
        d = gap / (root + rho * c) if c >= 0.0 else root - rho * c
        return d ** (-sp) * sn ** k

    width = math.sqrt(max(R - rho, 0.0) / R)
    pts = [c * width for c in (0.5, 2.0, 8.0) if c * width < math.pi]
    val, _ = integrate.quad(f, 0.0, math.pi, points=pts or None, epsabs=0.0, epsrel=1e-11, limit=300)
    return sphere_measure(dim - 1) * val / sp


def gagliardo_radial(params: FracParams, u: RadialProfile, eps: float = _EPS_BAND,
                     rtol: float = 1e-10) -> SeminormResult:
    """[u]^p_{W^{s,p}(R^N)} of a compactly supported radial profile.

    inside-inside : 2 |S^{N-1}| int_0^R rho^{N-1-sp} G(rho) drho with
                    G(rho) = int_0^1 |u(rho) - u(rho t)|^p t^{N-1} Phi(t) dt
    inside-outside: 2 |S^{N-1}| int_0^R |u(rho)|^p rho^{N-1} T(rho) drho with
                    T the exterior kernel integral (closed form for N = 1,
                    a ray integral for N >= 2).

    On the band 1 - eps < t < 1 the difference is linearised and integrated
    against the leading singular part of Phi in closed form.
    """
    N, s, p = params.dim, params.s, params.p
    if params.local:
        raise DomainError("radial Gagliardo route needs 0 < s < 1")
    sp = s * p
    R = u.R
    t, omt, wt = _t_rule(eps)
    phi = _phi_on_rule(N, sp, eps)
    kern = wt * t ** (N - 1) * phi
    band = phi_singular_coefficient(N, sp) * eps ** (p - sp) / (p - sp)
    S = sphere_measure(N)
    err = 0.0

    if u.power_cap is not None:
        c, b = u.power_cap
        expo = N - sp + b * p
        if not expo > 0:
            raise NumericFailure("power profile has infinite energy near the origin")
        J = float(np.dot(kern, (-np.expm1(b * np.log(t))) ** p)) + b ** p * band
        inside = 2.0 * S * abs(c) ** p * R ** (N - sp) * J / expo
    else:
        def G(rho):
            if rho == 0.0:
                return 0.0
            ur = float(u(rho))
            diff = np.abs(ur - u(rho * t)) ** p
            lin = abs(float(u.slope(rho)) * rho) ** p * band
            return rho ** (N - 1 - sp) * (float(np.dot(kern, diff)) + lin)

        pts = [b for b in u.breakpoints if 0.0 < b < R]
        inside, e1 = integrate.quad(G, 0.0, R, points=pts or None, epsabs=0.0, epsrel=rtol, limit=400)
        inside *= 2.0 * S
        err += 2.0 * S * abs(e1)

    def tail(rho):
        val = abs(float(u(rho))) ** p
        if val == 0.0:
            return 0.0
        return val * rho ** (N - 1) * _exterior_kernel(N, sp, rho, R)

    pts = [b for b in u.breakpoints if 0.0 < b < R]
    outside, e2 = integrate.quad(tail, 0.0, R, points=pts or None, epsabs=0.0, epsrel=rtol, limit=400)
    outside *= 2.0 * S
    err += 2.0 * S * abs(e2)
    return _result(inside + outside, p, "radial", err)
