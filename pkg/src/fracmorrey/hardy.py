"""Sharp fractional Hardy constant of the punctured space.

    h_{s,p} = 2 int_0^1 r^{N-1} (1 - r^{(sp-N)/p})^p Phi(r) dr

The integrand behaves like (1-r)^{p-1-sp} at r = 1.  On [1/2, 1] the
substitution 1 - r = v^{1/(p-sp)} makes it bounded and non-vanishing
at v = 0, which keeps the quadrature uniform as s approaches 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .params import DomainError, FracParams, NumericFailure, _phi, phi_singular_coefficient

_ASYMPTOTIC_GAP = 1e-10


@dataclass(frozen=True)
class HardyResult:
    constant: float
    quadratureError: float
    rateNormalized: float


def _integrand_factory(params: FracParams):
    N, sp, p = params.dim, params.sp, params.p
    g = (sp - N) / p
    memo = {}

    def phi(omr):
        # per-call cache keyed on the exact node, so results never depend on it
        v = memo.get(omr)
        if v is None:
            v = _phi(N, sp, 1.0 - omr, omr).value
            memo[omr] = v
        return v

    def f(omr):
        r = 1.0 - omr
        cap = -math.expm1(g * math.log1p(-omr)) if omr < 1.0 else 1.0
        rpow = r ** (N - 1) if N > 1 else 1.0
        return rpow * cap ** p * phi(omr)

    return f


def hardy_constant(params: FracParams, rtol: float = 1e-11) -> HardyResult:
    if params.local:
        raise DomainError("the fractional Hardy constant needs 0 < s < 1")
    N, sp, p = params.dim, params.sp, params.p
    f = _integrand_factory(params)
    k = 1.0 / (p - sp)
    limit = _endpoint_limit(params)

    def outer(r):
        return f(1.0 - r)

    def inner(v):
        # 1 - r = v^k, dr = k v^{k-1} dv; v in [0, 2^{-(p-sp)}]
        omr = v ** k
        if omr < _ASYMPTOTIC_GAP:
            # f(omr) ~ limit * omr^{p-1-sp}, so the substituted integrand is flat
            return k * limit
        return f(omr) * k * v ** (k - 1.0)

    total = 0.0
    err = 0.0
    for g, a, b in ((outer, 0.0, 0.5), (inner, 0.0, 0.5 ** (p - sp))):
        val, e, info, *msg = integrate.quad(g, a, b, epsabs=0.0, epsrel=rtol, limit=500, full_output=1)
        if msg and e > 1e-6 * abs(val):
            raise NumericFailure(f"Hardy quadrature did not converge (partial value {2.0 * (total + val)!r})")
        total += val
        err += e
    c = 2.0 * total
    return HardyResult(c, 2.0 * err, c * (1.0 - params.s) / (sp - N) ** p)


def _endpoint_limit(params: FracParams) -> float:
    """lim_{omr -> 0} f(omr) / omr^{p-1-sp}: g^p times the singular coefficient."""
    g = (params.sp - params.dim) / params.p
    return g ** params.p * phi_singular_coefficient(params.dim, params.sp)


@dataclass(frozen=True)
class HardyScan:
    rows: list  # (s, constant, rateNormalized), in grid order
    slope: float  # log-slope of constant vs sp-N over the three smallest sp-N

    @property
    def spread(self) -> float:
        r = [row[2] for row in self.rows]
        return max(r) / min(r)


def hardy_rate_scan(base: FracParams, sGrid) -> HardyScan:
    rows = []
    for s in sGrid:
        prm = base.with_s(float(s))
        res = hardy_constant(prm)
        rows.append((prm.s, res.constant, res.rateNormalized))
    if len(rows) < 3:
        raise DomainError("a rate scan needs at least three grid points")
    N, p = base.dim, base.p
    tail = sorted(rows, key=lambda row: row[0] * p - N)[:3]
    x = np.log([row[0] * p - N for row in tail])
    y = np.log([row[1] for row in tail])
    slope = float(np.polyfit(x, y, 1)[0])
    return HardyScan(rows, slope)
