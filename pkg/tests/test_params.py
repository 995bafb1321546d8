import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, special

from fracmorrey.params import (
    DomainError,
    FracParams,
    NearDiagonalError,
    bbm_constant,
    geometry,
    holder_exponent,
    localized_morrey_constant,
    phi_kernel,
    phi_singular_coefficient,
    phi_two_point_sum,
    psi_kernel,
    sphere_measure,
    theta_constant,
    theta_objective,
    unit_ball_volume,
)


def admissible(dim=1):
    return st.tuples(st.floats(1.2, 12.0), st.floats(0.05, 0.98)).filter(
        lambda t: t[1] * t[0] > dim * 1.02
    ).map(lambda t: FracParams(dim, t[1], t[0]))


# ---------------------------------------------------------------------------
# parameters


@pytest.mark.parametrize("args", [(1, 0.0, 2.0), (1, 1.2, 2.0), (1, 0.5, 1.0), (0, 0.9, 3.0),
                                  (1, 0.5, 2.0), (2, 0.9, 2.0), (1, float("nan"), 3.0)])
def test_inadmissible_parameters_raise(args):
    with pytest.raises(DomainError):
        FracParams(*args)


def test_derived_exponents():
    prm = FracParams(1, 0.75, 4.0)
    assert prm.sp == 3.0
    assert prm.alpha == pytest.approx(0.5)
    assert prm.beta == pytest.approx(2.0 / 3.0)
    assert holder_exponent(prm) == prm.alpha
    assert not prm.local and FracParams(1, 1.0, 2.0).local
    assert prm.with_s(0.9).s == 0.9 and prm.with_p(8.0).p == 8.0


@given(admissible(1))
def test_holder_exponent_below_zeta_exponent(prm):
    # (sp-N)/(p-1) > s - N/p  <=>  s < 1
    assert 0.0 < prm.alpha < prm.beta < 1.0


def test_ball_and_sphere_measures():
    assert unit_ball_volume(1) == pytest.approx(2.0)
    assert unit_ball_volume(2) == pytest.approx(math.pi)
    assert unit_ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0)
    assert sphere_measure(1) == pytest.approx(2.0)
    assert sphere_measure(2) == pytest.approx(2.0 * math.pi)
    assert sphere_measure(3) == pytest.approx(4.0 * math.pi)
    for n in range(1, 7):
        g = geometry(n)
        assert g.sphereMeasure == pytest.approx(n * g.omegaN, rel=1e-14)


# ---------------------------------------------------------------------------
# kernels


@given(admissible(1), st.floats(0.0, 0.999))
def test_phi_1d_matches_two_point_sum(prm, r):
    assert phi_kernel(prm, r).value == pytest.approx(phi_two_point_sum(prm.sp, r), rel=1e-13)


def _phi2_hypergeometric(sp, r):
    # int_0^{2pi} (1 - 2 r cos t + r^2)^{-lam} dt = 2 pi 2F1(lam, lam; 1; r^2)
    lam = (2.0 + sp) / 2.0
    return 2.0 * math.pi * special.hyp2f1(lam, lam, 1.0, r * r)


@pytest.mark.parametrize("s,p", [(0.75, 4.0), (0.9, 3.0), (0.6, 8.0)])
@pytest.mark.parametrize("r", [0.0, 0.1, 0.5, 0.9, 0.99])
def test_phi_2d_matches_hypergeometric_oracle(s, p, r):
    prm = FracParams(2, s, p)
    assert phi_kernel(prm, r).value == pytest.approx(_phi2_hypergeometric(prm.sp, r), rel=1e-9)


def _phi3_closed(sp, r):
    q = 3.0 + sp
    if r == 0.0:
        return 4.0 * math.pi
    return 2.0 * math.pi / (r * (q - 2.0)) * ((1.0 - r) ** (2.0 - q) - (1.0 + r) ** (2.0 - q))


@pytest.mark.parametrize("r", [0.0, 0.3, 0.7, 0.95])
def test_phi_3d_matches_closed_form(r):
    prm = FracParams(3, 0.8, 5.0)
    assert phi_kernel(prm, r).value == pytest.approx(_phi3_closed(prm.sp, r), rel=1e-9)


@pytest.mark.parametrize("dim", [2, 3])
def test_singular_coefficient_is_the_edge_asymptotics(dim):
    prm = FracParams(dim, 0.8, 5.0)
    e = 1e-6
    v = phi_kernel(prm, 1.0 - e).value * e ** (1.0 + prm.sp)
    assert v == pytest.approx(phi_singular_coefficient(dim, prm.sp), rel=1e-4)


def test_phi_rejects_the_unit_radius():
    with pytest.raises(DomainError):
        phi_kernel(FracParams(1, 0.8, 2.0), 1.0)


@given(admissible(1), st.floats(0.01, 10.0), st.floats(0.01, 10.0), st.floats(0.1, 10.0))
def test_psi_symmetry_and_scaling_1d(prm, rho, r, lam):
    if abs(rho - r) < 1e-3 * max(rho, r):
        return
    a = psi_kernel(prm, rho, r).value
    assert psi_kernel(prm, r, rho).value == a
    q = prm.dim + prm.sp
    assert psi_kernel(prm, lam * rho, lam * r).value * lam ** q == pytest.approx(a, rel=1e-10)


@pytest.mark.parametrize("rho,r", [(1.0, 0.3), (0.2, 1.7), (3.0, 2.5)])
def test_psi_reduces_to_phi_2d(rho, r):
    prm = FracParams(2, 0.75, 4.0)
    hi, lo = max(rho, r), min(rho, r)
    want = hi ** (-(2.0 + prm.sp)) * phi_kernel(prm, lo / hi).value
    assert psi_kernel(prm, rho, r).value == pytest.approx(want, rel=1e-10)
    assert psi_kernel(prm, rho, r).value == psi_kernel(prm, r, rho).value


def test_psi_diagonal_and_nonpositive_radii():
    prm = FracParams(1, 0.75, 2.0)
    with pytest.raises(NearDiagonalError):
        psi_kernel(prm, 1.0, 1.0)
    with pytest.raises(DomainError):
        psi_kernel(prm, 0.0, 1.0)
    assert psi_kernel(prm, 1.0, 1.0 + 1e-5).nearDiagonal


# ---------------------------------------------------------------------------
# theta


def _theta_dense_scan(prm, points=400001):
    u = np.linspace(-9.0, 9.0, points)
    T = 1.0 + 10.0 ** u
    return unit_ball_volume(prm.dim) * float(np.max(theta_objective(prm, T)))


@pytest.mark.parametrize("args", [(1, 0.75, 2.0), (1, 0.9, 32.0), (1, 0.505, 2.0), (2, 0.75, 4.0),
                                  (1, 0.99, 2.0)])
def test_theta_matches_dense_scan(args):
    prm = FracParams(*args)
    th = theta_constant(prm)
    dense = _theta_dense_scan(prm)
    assert th.value >= dense * (1.0 - 1e-12)
    assert th.value == pytest.approx(dense, rel=1e-8)
    assert len(th.peaks) == 1


def test_theta_reference_value():
    # frozen from the dense-scan oracle above
    th = theta_constant(FracParams(1, 0.75, 2.0))
    assert th.value == pytest.approx(0.2784892060436978, rel=1e-10)
    assert th.t_star == pytest.approx(1.907402080692309, rel=1e-6)


@given(admissible(1), st.floats(-6.0, 6.0))
def test_theta_dominates_objective(prm, u):
    th = theta_constant(prm)
    val = unit_ball_volume(1) * float(theta_objective(prm, 1.0 + 10.0 ** u))
    assert val <= th.value * (1.0 + 1e-12)


def test_theta_local_case_raises():
    with pytest.raises(DomainError):
        theta_constant(FracParams(1, 1.0, 2.0))


# ---------------------------------------------------------------------------
# constants


@pytest.mark.parametrize("dim", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("excess", [1.0, 2.5])
def test_bbm_constant_equals_projected_ball_volume(dim, excess):
    p = dim + excess
    # int_{S^{N-1}} |w_1| = 2 omega_{N-1}, with omega_0 = 1
    want = 2.0 * (unit_ball_volume(dim - 1) if dim > 1 else 1.0) / p
    assert bbm_constant(FracParams(dim, 1.0, p)) == pytest.approx(want, rel=1e-12)


def test_bbm_constant_by_quadrature_2d():
    val, _ = integrate.quad(lambda t: abs(math.cos(t)), 0.0, 2.0 * math.pi)
    assert bbm_constant(FracParams(2, 1.0, 3.0)) == pytest.approx(val / 3.0, rel=1e-12)


def test_localized_constant():
    prm = FracParams(1, 0.75, 2.0)
    c = localized_morrey_constant(prm, 3.0)
    want = 4.0 ** 2.5 * (2.0 ** 5 / (2.0 * 3.0)) ** 0.5
    assert c == pytest.approx(want, rel=1e-14)
    with pytest.raises(DomainError):
        localized_morrey_constant(prm, 0.0)
