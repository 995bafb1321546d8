"""Trial functions and the upper bounds on the sharp Morrey constant they give.

Any admissible u gives  m_{s,p} <= [u]^p_{W^{s,p}} / [u]^p_{C^{0,alpha}}.
The library holds the capacitary-type profile zeta, a smoothed cone, the
truncated fundamental solution of the p-Laplacian (s = 1) and user bumps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate

from . import _kernels
from .params import DomainError, FracParams, NumericFailure, localized_morrey_constant, sphere_measure
from .quadrature import (
    GridFunction,
    RadialProfile,
    gagliardo_radial,
    holder_seminorm_grid,
    local_gagliardo_grid,
)

ZETA = "Zeta"
SMOOTH_CONE = "SmoothCone"
TRUNCATED_FUNDAMENTAL = "TruncatedFundamental"
CUSTOM_BUMP = "CustomBump"
KINDS = (ZETA, SMOOTH_CONE, TRUNCATED_FUNDAMENTAL, CUSTOM_BUMP)


@dataclass(frozen=True)
class TrialFunction:
    kind: str
    params: FracParams
    eps: Optional[float] = None
    bump: Optional[RadialProfile] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown trial kind {self.kind!r}")
        if self.kind == ZETA:
            b = self.params.beta
            if not (0.0 < b < 1.0):
                raise DomainError(f"zeta exponent (sp-N)/(p-1) = {b!r} must lie in (0, 1)")
        if self.kind == SMOOTH_CONE and not (self.eps is not None and self.eps > 0.0):
            raise DomainError("SmoothCone needs eps > 0")
        if self.kind == CUSTOM_BUMP and self.bump is None:
            raise DomainError("CustomBump needs a RadialProfile")

    @classmethod
    def zeta(cls, params):
        return cls(ZETA, params)

    @classmethod
    def smooth_cone(cls, params, eps):
        return cls(SMOOTH_CONE, params, eps=float(eps))

    @classmethod
    def truncated_fundamental(cls, params):
        return cls(TRUNCATED_FUNDAMENTAL, params)

    @classmethod
    def custom_bump(cls, params, bump: RadialProfile):
        return cls(CUSTOM_BUMP, params, bump=bump)

    @property
    def exponent(self) -> float:
        """Power of the zeta / truncated fundamental profile."""
        N, p = self.params.dim, self.params.p
        if self.kind == ZETA:
            return self.params.beta
        if self.kind == TRUNCATED_FUNDAMENTAL:
            return (p - N) / (p - 1.0)
        raise DomainError(f"{self.kind} has no power exponent")

    def radial_profile(self) -> RadialProfile:
        if self.kind in (ZETA, TRUNCATED_FUNDAMENTAL):
            b = self.exponent
            return RadialProfile(
                lambda r: 1.0 - np.asarray(r, dtype=float) ** b,
                1.0,
                holder=1.0 if self.kind == ZETA else None,
                derivative=lambda r: -b * np.asarray(r, dtype=float) ** (b - 1.0),
                power_cap=(1.0, b),
            )
        if self.kind == SMOOTH_CONE:
            e = self.eps
            R = math.sqrt(1.0 + 2.0 * e)  # sqrt(e^2 + R^2) - e = 1
            return RadialProfile(
                lambda r: np.maximum(1.0 - (np.sqrt(e * e + np.asarray(r, dtype=float) ** 2) - e), 0.0),
                R,
                derivative=lambda r: -np.asarray(r, dtype=float) / np.sqrt(e * e + np.asarray(r, dtype=float) ** 2),
            )
        return self.bump

    def __call__(self, x):
        """Evaluate at points given by their Euclidean norms or as an (M, N) array."""
        x = np.asarray(x, dtype=float)
        r = np.abs(x) if x.ndim <= 1 else np.sqrt((x * x).sum(axis=-1))
        return self.radial_profile()(r)

    def sample(self, L: float, n: int, center=0.0) -> GridFunction:
        """Grid restriction on a box of half-width L centred at ``center``."""
        prof = self.radial_profile()
        N = self.params.dim
        if N == 1:
            c = float(center)
            return GridFunction.sample(lambda x: prof(np.abs(x - c)), 1, L, n, origin=c)
        if N == 2:
            cx, cy = np.broadcast_to(np.asarray(center, dtype=float), (2,))
            return GridFunction.sample(lambda x, y: prof(np.hypot(x - cx, y - cy)), 2, L, n,
                                       origin=(cx, cy))
        raise DomainError("grid restrictions exist for N = 1 and N = 2 only")


@dataclass(frozen=True)
class UpperBoundRecord:
    trial: TrialFunction
    energy: float
    holderSeminorm: float
    bound: float


# ---------------------------------------------------------------------------
# Hoelder seminorms


def zeta_holder_seminorm(params: FracParams) -> float:
    """[zeta]_{C^{0, alpha}} = 1 exactly; see ``zeta_holder_grid_check``."""
    if params.local:
        raise DomainError("zeta is a trial function for 0 < s < 1")
    if not params.beta > params.alpha:
        raise NumericFailure("zeta exponent must exceed the Hoelder exponent")
    return 1.0


def zeta_holder_grid_check(params: FracParams, n: int = 8193, L: float = 1.5) -> float:
    """Grid Hoelder seminorm of zeta along a line through its centre.

    For a radial function the supremum over pairs with prescribed radii is
    reached on a common ray, so the 1-D restriction carries the full value.
    """
    z = TrialFunction.zeta(params)
    prof = z.radial_profile()
    g = GridFunction.sample(lambda x: prof(np.abs(x)), 1, L, n)
    return holder_seminorm_grid(params.alpha, g)[0]


def radial_holder_seminorm(profile: RadialProfile, alpha: float, n: int = 2049,
                           refine: int = 10) -> tuple[float, tuple[float, float]]:
    """Hoelder seminorm of a radial profile, sampled with local refinement.

    Pairs are taken on the ray [0, R] (enough for radial functions).  After
    the coarse argmax is found, both endpoints are resampled ``refine`` times
    finer on a window of two cells and the cross maximum recomputed.
    Returns the value and the radii of the maximising pair.
    """
    R = profile.R
    r = np.linspace(0.0, R, n)
    u = profile(r)
    val, i, j = _kernels.holder_max(np.ascontiguousarray(r[:, None]), u, float(alpha))
    if i < 0:
        return 0.0, (0.0, 0.0)
    h = r[1] - r[0]

    def window(c):
        lo, hi = max(c - 2.0 * h, 0.0), min(c + 2.0 * h, R)
        return np.linspace(lo, hi, 4 * refine + 1)

    xa, xb = window(r[i]), window(r[j])
    ref = _kernels.cross_holder_max(xa, profile(xa), xb, profile(xb), float(alpha))
    best = max(val, ref)
    return float(best), (float(r[i]), float(r[j]))


def _gradient_energy_radial(params: FracParams, prof: RadialProfile) -> float:
    N, p = params.dim, params.p
    val, _ = integrate.quad(lambda r: abs(float(prof.slope(r))) ** p * r ** (N - 1), 0.0, prof.R,
                            points=[b for b in prof.breakpoints if 0 < b < prof.R] or None,
                            epsabs=0.0, epsrel=1e-11, limit=400)
    return sphere_measure(N) * val


# ---------------------------------------------------------------------------
# bounds


def morrey_upper_bound(params: FracParams, trial: TrialFunction) -> UpperBoundRecord:
    """Rayleigh quotient energy / holder^p of a trial function."""
    if trial.params != params:
        raise DomainError("trial was built for different parameters")
    kind = trial.kind
    if kind in (ZETA, SMOOTH_CONE) and params.local:
        raise DomainError(f"{kind} needs 0 < s < 1")
    if kind == TRUNCATED_FUNDAMENTAL and not params.local:
        raise DomainError("TruncatedFundamental is a trial for s = 1 only")
    prof = trial.radial_profile()
    alpha = params.alpha
    if kind == ZETA:
        energy = gagliardo_radial(params, prof).raisedToP
        holder = zeta_holder_seminorm(params)
    elif kind == SMOOTH_CONE:
        energy = gagliardo_radial(params, prof).raisedToP
        e = trial.eps
        holder = math.sqrt(e * e + 1.0) - e  # two-point ratio at x = e_1, y = 0
    elif kind == TRUNCATED_FUNDAMENTAL:
        g = trial.exponent
        energy = sphere_measure(params.dim) * g ** (params.p - 1.0)
        holder = 1.0 if params.dim == 1 else radial_holder_seminorm(prof, alpha)[0]
    else:
        energy = (_gradient_energy_radial(params, prof) if params.local
                  else gagliardo_radial(params, prof).raisedToP)
        holder = prof.holder if prof.holder is not None else radial_holder_seminorm(prof, alpha)[0]
    if not holder > 0.0:
        raise NumericFailure("trial has vanishing Hoelder seminorm")
    return UpperBoundRecord(trial, float(energy), float(holder), float(energy / holder ** params.p))


def zeta_bound_scan(base: FracParams, sGrid) -> list:
    """(s, energy, energy (1-s)/(sp-N)^{p-1}) for zeta along ``sGrid``."""
    out = []
    for s in sGrid:
        prm = base.with_s(float(s))
        e = morrey_upper_bound(prm, TrialFunction.zeta(prm)).energy
        out.append((prm.s, e, e * (1.0 - prm.s) / (prm.sp - prm.dim) ** (prm.p - 1.0)))
    return out


# ---------------------------------------------------------------------------
# localized Morrey inequality on samples


@dataclass(frozen=True)
class LocalizedMorreyReport:
    pairs: int
    violations: int
    worstRatio: float  # max of lhs / rhs over the sampled pairs
    constant: float


def localized_morrey_check(params: FracParams, u: GridFunction, lambdaB1: float,
                           pairs: int = 100, slack: float = 0.1, seed: int = 20240917,
                           max_separation: Optional[float] = None) -> LocalizedMorreyReport:
    """Sample |u(x)-u(y)| / |x-y|^alpha <= C [u]_{W^{s,p}(B_{d/2}((x+y)/2))}.

    Here d = |x - y|, and C uses ``lambdaB1 (1 + slack)`` in place of the
    Poincare constant.  Pairs whose ball escapes the box or carries fewer
    than two nodes are redrawn.
    """
    if u.dim != 1 and u.dim != 2:
        raise DomainError("grid functions are 1-D or 2-D")
    rng = np.random.default_rng(seed)
    C = localized_morrey_constant(params, lambdaB1 * (1.0 + slack))
    pts = u.points()
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    h = u.h
    dmax = max_separation if max_separation is not None else float(np.min(hi - lo))
    done = 0
    bad = 0
    worst = 0.0
    tries = 0
    while done < pairs:
        tries += 1
        if tries > 200 * pairs:
            raise NumericFailure("could not draw admissible pairs for the localized check")
        i, j = rng.integers(0, pts.shape[0], size=2)
        x, y = pts[i], pts[j]
        d = float(np.linalg.norm(x - y))
        if d < 4.0 * h or d > dmax:
            continue
        c = 0.5 * (x + y)
        try:
            semi = local_gagliardo_grid(params, u, c, 0.5 * d).value
        except DomainError:
            continue
        lhs = abs(u.values[i] - u.values[j]) / d ** params.alpha
        rhs = C * semi
        done += 1
        if lhs > 0.0:
            ratio = lhs / rhs if rhs > 0.0 else math.inf
            worst = max(worst, ratio)
            if ratio > 1.0:
                bad += 1
    return LocalizedMorreyReport(pairs, bad, worst, C)
