import math

import numpy as np
import pytest
from scipy import integrate

from fracmorrey.extremal import PinnedProblem, lambda_estimate, solve_pinned
from fracmorrey.params import DomainError, FracParams
from fracmorrey.quadrature import GridFunction, RadialProfile, gagliardo_grid
from fracmorrey.trial import (
    TrialFunction,
    localized_morrey_check,
    morrey_upper_bound,
    radial_holder_seminorm,
    zeta_bound_scan,
    zeta_holder_grid_check,
    zeta_holder_seminorm,
)


def test_trial_validation():
    prm = FracParams(1, 0.8, 3.0)
    with pytest.raises(DomainError):
        TrialFunction("Spline", prm)
    with pytest.raises(DomainError):
        TrialFunction.smooth_cone(prm, 0.0)
    with pytest.raises(DomainError):
        TrialFunction("CustomBump", prm)
    with pytest.raises(DomainError):
        morrey_upper_bound(prm, TrialFunction.zeta(FracParams(1, 0.9, 3.0)))
    with pytest.raises(DomainError):
        morrey_upper_bound(prm, TrialFunction.truncated_fundamental(prm))
    loc = FracParams(1, 1.0, 3.0)
    with pytest.raises(DomainError):
        zeta_holder_seminorm(loc)


def test_zeta_profile_shape():
    prm = FracParams(1, 0.75, 2.0)
    z = TrialFunction.zeta(prm)
    assert z.exponent == pytest.approx(0.5)
    assert z(0.0) == 1.0 and z(1.0) == 0.0 and z(2.0) == 0.0
    assert z(0.25) == pytest.approx(0.5)
    assert z(np.array([[0.3, 0.4]])) == pytest.approx(1.0 - 0.5 ** 0.5)


@pytest.mark.parametrize("args", [(1, 0.75, 2.0), (1, 0.8, 4.0), (1, 0.9, 3.0)])
def test_zeta_holder_seminorm_is_one_under_refinement(args):
    prm = FracParams(*args)
    vals = [zeta_holder_grid_check(prm, n=n) for n in (1025, 4097, 8193)]
    assert vals[0] <= vals[1] <= vals[2] <= 1.0 + 1e-12
    assert abs(vals[-1] - 1.0) <= 1e-3


def test_zeta_holder_seminorm_2d_on_a_grid():
    prm = FracParams(2, 0.9, 4.0)
    u = TrialFunction.zeta(prm).sample(1.2, 65)
    from fracmorrey.quadrature import holder_seminorm_grid

    val, _ = holder_seminorm_grid(prm.alpha, u)
    assert 0.97 <= val <= 1.0 + 1e-12


def test_zeta_upper_bound_reference_value():
    # frozen from the radial route; the grid route agrees within its known h^beta error
    prm = FracParams(1, 0.75, 2.0)
    rec = morrey_upper_bound(prm, TrialFunction.zeta(prm))
    assert rec.holderSeminorm == 1.0
    assert rec.energy == pytest.approx(7.353841890912, rel=1e-10)
    grid = gagliardo_grid(prm, TrialFunction.zeta(prm).sample(1.5, 8193)).raisedToP
    assert grid == pytest.approx(rec.energy, rel=0.02)


def test_smooth_cone_two_point_ratio_is_a_valid_lower_holder_value():
    # the bound divides by the ratio at (e_1, 0); the full seminorm can only be larger
    prm = FracParams(1, 0.9, 16.0)
    for eps in (0.05, 0.1, 0.3):
        cone = TrialFunction.smooth_cone(prm, eps)
        sampled, _ = radial_holder_seminorm(cone.radial_profile(), prm.alpha, n=4097)
        two_point = math.sqrt(eps * eps + 1.0) - eps
        assert morrey_upper_bound(prm, cone).holderSeminorm == two_point
        assert two_point <= sampled <= 1.0


def test_smooth_cone_bound_root():
    prm = FracParams(1, 0.9, 16.0)
    rec = morrey_upper_bound(prm, TrialFunction.smooth_cone(prm, 0.1))
    assert rec.bound ** (1.0 / 16.0) == pytest.approx(1.0932, abs=2e-4)


def test_truncated_fundamental_bounds():
    rec = morrey_upper_bound(FracParams(1, 1.0, 3.0), TrialFunction.truncated_fundamental(FracParams(1, 1.0, 3.0)))
    assert rec.energy == pytest.approx(2.0, rel=1e-14)
    assert rec.bound == pytest.approx(2.0, rel=1e-14)
    prm = FracParams(2, 1.0, 3.0)
    t = TrialFunction.truncated_fundamental(prm)
    g = t.exponent
    val, _ = integrate.quad(lambda r: (g * r ** (g - 1.0)) ** 3 * r, 0.0, 1.0)
    rec = morrey_upper_bound(prm, t)
    assert rec.energy == pytest.approx(2.0 * math.pi * val, rel=1e-10)
    assert rec.energy == pytest.approx(math.pi / 2.0, rel=1e-12)
    assert 0.99 <= rec.holderSeminorm <= 1.0


def test_custom_bump_local_and_fractional():
    loc = FracParams(1, 1.0, 2.0)
    prof = RadialProfile(lambda r: (1.0 - r * r) ** 2, 1.0, derivative=lambda r: -4.0 * r * (1.0 - r * r))
    rec = morrey_upper_bound(loc, TrialFunction.custom_bump(loc, prof))
    assert rec.energy == pytest.approx(256.0 / 105.0, rel=1e-10)
    frac = FracParams(1, 0.8, 2.0)
    rec2 = morrey_upper_bound(frac, TrialFunction.custom_bump(frac, prof))
    m = solve_pinned(PinnedProblem(frac, 4.0, 513, 0.0, 1.0)).morreyEstimate
    assert rec2.bound >= m


@pytest.mark.parametrize("s,p", [(0.8, 2.0), (0.7, 4.0)])
def test_zeta_bound_dominates_the_pinned_estimate(s, p):
    prm = FracParams(1, s, p)
    up = morrey_upper_bound(prm, TrialFunction.zeta(prm)).bound
    m = solve_pinned(PinnedProblem(prm, 4.0, 513, 0.0, 1.0)).morreyEstimate
    assert m <= up * 1.15


def test_zeta_scan_normalisation_is_bounded():
    rows = zeta_bound_scan(FracParams(1, 0.6, 2.0), (0.51, 0.52, 0.54, 0.58, 0.66, 0.8, 0.9))
    ratio = [r[2] for r in rows]
    assert max(ratio) / min(ratio) <= 10.0
    energy = [r[1] for r in rows]
    assert all(b > a for a, b in zip(energy, energy[1:]))


def test_localized_morrey_check_on_zeta():
    prm = FracParams(1, 0.8, 3.0)
    lam = lambda_estimate(prm, restarts=1).value
    u = TrialFunction.zeta(prm).sample(1.5, 257)
    rep = localized_morrey_check(prm, u, lam, pairs=60)
    assert rep.pairs == 60 and rep.violations == 0
    assert 0.0 < rep.worstRatio < 1.0


def test_sampling_tracks_the_centre():
    prm = FracParams(2, 0.9, 4.0)
    u = TrialFunction.zeta(prm).sample(1.0, 21, center=(0.5, -0.5))
    k = int(np.argmax(u.values))
    assert u.points()[k].tolist() == pytest.approx([0.5, -0.5])
    with pytest.raises(DomainError):
        TrialFunction.zeta(FracParams(3, 0.9, 4.0)).sample(1.0, 9)
