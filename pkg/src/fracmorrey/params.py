"""Parameter triples, geometric constants and the special one-dimensional kernels.

The kernels are

    Phi(r)      = |S^{N-2}| int_{-1}^{1} (1-t^2)^{(N-3)/2} (1 - 2tr + r^2)^{-(N+sp)/2} dt
    Psi(rho, r) = |S^{N-2}| int_{-1}^{1} (1-t^2)^{(N-3)/2} ((rho-r)^2 + 2 rho r (1-t))^{-(N+sp)/2} dt

for N >= 2, and the two-point sums over S^0 = {-1, 1} for N = 1.  With this
normalisation Psi(rho, r) = rho^{-(N+sp)} Phi(r/rho) holds exactly, and the
angular part of the kernel |x-y|^{-N-sp} averaged over both spheres is
|S^{N-1}| Psi(|x|, |y|).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


class NumericFailure(RuntimeError):
    """Raised when a numerical procedure cannot deliver a trustworthy value."""


class NearDiagonalError(DomainError):
    """Raised for kernel evaluations on the divergent diagonal rho == r."""


@dataclass(frozen=True)
class FracParams:
    """The triple (N, s, p) in the Morrey regime s*p > N.

    ``s = 1`` denotes the local case (gradient energy); operations that do not
    support it reject it themselves.
    """

    dim: int
    s: float
    p: float

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise DomainError(f"dim must be a positive integer, got {self.dim!r}")
        if not (0.0 < self.s <= 1.0):
            raise DomainError(f"s must lie in (0, 1], got {self.s!r}")
        if not (1.0 < self.p < math.inf):
            raise DomainError(f"p must lie in (1, inf), got {self.p!r}")
        if not self.s * self.p > self.dim:
            raise DomainError(
                f"s*p = {self.s * self.p!r} must exceed N = {self.dim} (Morrey regime)"
            )
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "p", float(self.p))

    @property
    def sp(self) -> float:
        return self.s * self.p

    @property
    def alpha(self) -> float:
        return self.s - self.dim / self.p

    @property
    def beta(self) -> float:
        """Exponent (sp - N)/(p - 1) of the capacitary profile."""
        return (self.sp - self.dim) / (self.p - 1.0)

    @property
    def local(self) -> bool:
        return self.s == 1.0

    def with_s(self, s: float) -> "FracParams":
        return FracParams(self.dim, s, self.p)

    def with_p(self, p: float) -> "FracParams":
        return FracParams(self.dim, self.s, p)


def holder_exponent(params: FracParams) -> float:
    """Return s - N/p, the Hoelder exponent of the embedding."""
    return params.s - params.dim / params.p


# ---------------------------------------------------------------------------
# geometry


def unit_ball_volume(n: int) -> float:
    """omega_n = pi^{n/2} / Gamma(n/2 + 1); omega_0 = 1."""
    if n < 0:
        raise DomainError("dimension must be non-negative")
    if n == 0:
        return 1.0
    if n == 1:
        return 2.0
    if n == 2:
        return math.pi
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def sphere_measure(n: int) -> float:
    """(n-1)-dimensional measure of the unit sphere in R^n, n*omega_n."""
    return n * unit_ball_volume(n)


@dataclass(frozen=True)
class GeometryConstants:
    omegaN: float
    sphereMeasure: float


def geometry(dim: int) -> GeometryConstants:
    return GeometryConstants(unit_ball_volume(dim), sphere_measure(dim))


def _subsphere_measure(dim: int) -> float:
    """|S^{N-2}|, the measure of the equatorial sphere (N >= 2)."""
    return sphere_measure(dim - 1)


@dataclass(frozen=True)
class KernelEval:
    value: float
    estimatedError: float
    nearDiagonal: bool = field(default=False)


# ---------------------------------------------------------------------------
# kernels

_QUAD_RTOL = 1e-12


def _angular_integral(dim: int, sp: float, a2: float, b: float) -> tuple[float, float]:
    """|S^{N-2}| int_0^pi sin^{N-2}(th) (a2 + 4 b sin^2(th/2))^{-(N+sp)/2} dth.

    ``a2`` is the squared radial gap and ``b`` the product of radii; the
    substitution t = cos(th) removes the endpoint weight, so the N = 2 case
    needs no special treatment.
    """
    expo = -(dim + sp) / 2.0
    k = dim - 2

    def f(th):
        sh = math.sin(0.5 * th)
        return math.sin(th) ** k * (a2 + 4.0 * b * sh * sh) ** expo

    width = math.sqrt(a2 / b) if b > 0 else math.pi
    pts = [c * width for c in (0.5, 2.0, 8.0, 32.0, 128.0) if c * width < math.pi]
    val, err = integrate.quad(
        f, 0.0, math.pi, points=pts or None, epsabs=0.0, epsrel=_QUAD_RTOL, limit=500
    )
    c = _subsphere_measure(dim)
    return c * val, c * abs(err)


def _phi_closed_1d(sp: float, r, one_minus_r=None):
    r = np.asarray(r, dtype=float)
    omr = 1.0 - r if one_minus_r is None else np.asarray(one_minus_r, dtype=float)
    return omr ** (-(1.0 + sp)) + (1.0 + r) ** (-(1.0 + sp))


def phi_kernel(params: FracParams, r: float) -> KernelEval:
    """Evaluate Phi_{N,sp}(r) for 0 <= r < 1."""
    return _phi(params.dim, params.sp, float(r))


def _phi(dim: int, sp: float, r: float, one_minus_r: float | None = None) -> KernelEval:
    if not (0.0 <= r < 1.0):
        raise DomainError(f"Phi diverges for r >= 1 (got r={r!r})")
    omr = 1.0 - r if one_minus_r is None else one_minus_r
    if dim == 1:
        return KernelEval(float(_phi_closed_1d(sp, r, omr)), 0.0)
    val, err = _angular_integral(dim, sp, omr * omr, r)
    return KernelEval(val, err)


def phi_two_point_sum(sp: float, r: float) -> float:
    """N = 1 kernel written as the sum over S^0 of |e - r w|^{-(1+sp)}."""
    return sum(abs(1.0 - r * w) ** (-(1.0 + sp)) for w in (-1.0, 1.0))


def phi_singular_coefficient(dim: int, sp: float) -> float:
    """Leading coefficient c with Phi(t) ~ c (1-t)^{-(1+sp)} as t -> 1."""
    if dim == 1:
        return 1.0
    return _subsphere_measure(dim) * 0.5 * special.beta((dim - 1) / 2.0, (1.0 + sp) / 2.0)


def psi_kernel(params: FracParams, rho: float, r: float) -> KernelEval:
    """Evaluate Psi_{N,sp}(rho, r); the diagonal rho == r diverges."""
    rho, r = float(rho), float(r)
    if rho <= 0.0 or r <= 0.0:
        raise DomainError("radii must be positive")
    gap = abs(rho - r)
    if gap == 0.0:
        raise NearDiagonalError(f"Psi diverges on the diagonal rho = r = {rho!r}")
    near = gap < 1e-3 * max(rho, r)
    dim, sp = params.dim, params.sp
    if dim == 1:
        val = gap ** (-(1.0 + sp)) + (rho + r) ** (-(1.0 + sp))
        return KernelEval(val, 0.0, near)
    # symmetric argument order keeps Psi(rho, r) == Psi(r, rho) bit for bit
    lo, hi = min(rho, r), max(rho, r)
    val, err = _angular_integral(dim, sp, gap * gap, lo * hi)
    return KernelEval(val, err, near)


# ---------------------------------------------------------------------------
# theta


@dataclass(frozen=True)
class ThetaResult:
    value: float
    t_star: float
    peaks: tuple
    log_objective_max: float

    def __float__(self):
        return self.value


def _theta_log_objective(params: FracParams, u):
    """log of (T-1)^N / ((T-1)^s + T^s)^p at T = 1 + 10^u."""
    u = np.asarray(u, dtype=float)
    N, s, p = params.dim, params.s, params.p
    log_tm1 = u * math.log(10.0)
    log_t = np.log1p(np.exp(log_tm1))
    ratio = np.exp(s * (log_tm1 - log_t))  # ((T-1)/T)^s
    return N * log_tm1 - p * (s * log_t + np.log1p(ratio))


def theta_objective(params: FracParams, T):
    """The (unscaled) objective (T-1)^N / ((T-1)^s + T^s)^p."""
    T = np.asarray(T, dtype=float)
    return np.exp(_theta_log_objective(params, np.log10(T - 1.0)))


def _golden_max(f, a: float, b: float, tol: float) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def theta_constant(params: FracParams, tol: float = 1e-11, scan_points: int = 4001,
                   allow_multimodal: bool = False) -> ThetaResult:
    """omega_N * sup_{T>1} (T-1)^N / ((T-1)^s + T^s)^p.

    A coarse scan over log10(T-1) in [-9, 9] brackets the maximum, which is
    then refined by golden-section search.  Several separated local maxima
    raise ``NumericFailure`` unless ``allow_multimodal`` is set.
    """
    if params.local:
        raise DomainError("theta is defined for 0 < s < 1")
    grid = np.linspace(-9.0, 9.0, scan_points)
    vals = _theta_log_objective(params, grid)
    interior = np.flatnonzero((vals[1:-1] > vals[:-2]) & (vals[1:-1] >= vals[2:])) + 1
    if interior.size == 0:
        raise NumericFailure("theta objective has no interior maximum on the scan window")
    top = vals[interior].max()
    # local maxima far below the top are numerical ripples of a flat tail
    peaks = tuple(float(grid[i]) for i in interior if vals[i] > top - 20.0)
    if len(peaks) > 1 and not allow_multimodal:
        raise NumericFailure(f"theta objective has several local maxima at log10(T-1) = {peaks}")
    i = int(interior[np.argmax(vals[interior])])
    f = lambda u: float(_theta_log_objective(params, u))
    u_star = _golden_max(f, grid[i - 1], grid[i + 1], tol)
    lmax = f(u_star)
    return ThetaResult(
        value=unit_ball_volume(params.dim) * math.exp(lmax),
        t_star=1.0 + 10.0 ** u_star,
        peaks=peaks,
        log_objective_max=lmax,
    )


# ---------------------------------------------------------------------------
# constants


def bbm_constant(params: FracParams) -> float:
    """K_{p,N} = (1/p) int_{S^{N-1}} |<w, e_1>| dH^{N-1}(w)."""
    N, p = params.dim, params.p
    if N == 1:
        return 2.0 / p
    if N == 2:
        return 4.0 / p
    if N == 3:
        return 2.0 * math.pi / p
    val, _ = integrate.quad(lambda th: abs(math.cos(th)) * math.sin(th) ** (N - 2), 0.0, math.pi,
                            epsabs=0.0, epsrel=1e-13)
    return _subsphere_measure(N) * val / p


def localized_morrey_constant(params: FracParams, lambdaB1: float) -> float:
    """4^{(4N+1)/p} (2^{N+2p} / (omega_N lambdaB1))^{1/p}."""
    if not lambdaB1 > 0.0:
        raise DomainError("lambdaB1 must be positive")
    N, p = params.dim, params.p
    return 4.0 ** ((4 * N + 1) / p) * (2.0 ** (N + 2 * p) / (unit_ball_volume(N) * lambdaB1)) ** (1.0 / p)
