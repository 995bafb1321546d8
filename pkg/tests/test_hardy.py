import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special

from fracmorrey.hardy import hardy_constant, hardy_rate_scan
from fracmorrey.params import DomainError, FracParams


def _hardy_oracle(prm, phi, nodes=4000):
    """Gauss-Legendre in t with r = 1 - t^2; convergence is algebraic because of r^g at t = 1."""
    N, sp, p = prm.dim, prm.sp, prm.p
    g = (sp - N) / p
    x, w = np.polynomial.legendre.leggauss(nodes)
    t = 0.5 * (x + 1.0)
    w = 0.5 * w
    r = 1.0 - t * t
    f = r ** (N - 1) * (1.0 - r ** g) ** p * phi(r) * 2.0 * t
    return 2.0 * float(np.dot(w, f))


def test_hardy_1d_against_independent_oracle():
    prm = FracParams(1, 0.75, 2.0)
    phi = lambda r: (1.0 - r) ** (-(1.0 + prm.sp)) + (1.0 + r) ** (-(1.0 + prm.sp))
    res = hardy_constant(prm)
    assert res.constant == pytest.approx(_hardy_oracle(prm, phi), rel=1e-8)
    assert res.constant == pytest.approx(0.5119885846604983, rel=1e-11)
    assert res.quadratureError < 1e-9


def test_hardy_2d_against_hypergeometric_kernel():
    prm = FracParams(2, 0.75, 4.0)
    lam = (2.0 + prm.sp) / 2.0
    phi = lambda r: 2.0 * math.pi * special.hyp2f1(lam, lam, 1.0, r * r)
    assert hardy_constant(prm).constant == pytest.approx(_hardy_oracle(prm, phi), rel=1e-7)


def test_hardy_near_one_stays_finite():
    res = hardy_constant(FracParams(1, 0.99, 2.0))
    assert res.constant == pytest.approx(24.652, rel=1e-4)


def test_hardy_rejects_the_local_case():
    with pytest.raises(DomainError):
        hardy_constant(FracParams(1, 1.0, 2.0))


@given(st.floats(0.52, 0.97), st.floats(2.0, 6.0))
def test_hardy_constant_positive(s, p):
    if s * p <= 1.05:
        return
    prm = FracParams(1, s, p)
    res = hardy_constant(prm)
    assert 0.0 < res.constant < math.inf
    assert res.rateNormalized == pytest.approx(res.constant * (1.0 - s) / (s * p - 1.0) ** p)


def test_hardy_constant_increases_with_s():
    vals = [hardy_constant(FracParams(1, s, 2.0)).constant for s in (0.55, 0.65, 0.75, 0.85, 0.95)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_hardy_rate_scan():
    scan = hardy_rate_scan(FracParams(1, 0.6, 2.0), (0.505, 0.51, 0.52, 0.54, 0.58))
    assert abs(scan.slope - 2.0) <= 0.2
    assert scan.spread <= 5.0
    assert [row[0] for row in scan.rows] == [0.505, 0.51, 0.52, 0.54, 0.58]
    with pytest.raises(DomainError):
        hardy_rate_scan(FracParams(1, 0.6, 2.0), (0.6, 0.7))
