import numpy as np
import pytest
from hypothesis import given, strategies as st

from fracmorrey.extremal import (
    PinnedProblem,
    SolverConfig,
    centre_graded_nodes,
    discrete_energy_and_gradient,
    el_residual,
    lambda_estimate,
    max_principle_violation,
    morrey_lower_bound,
    pointwise_bound_check,
    regularity_diagnostic,
    solve_pinned,
)
from fracmorrey.params import DomainError, FracParams, theta_constant
from fracmorrey.quadrature import GridFunction, gagliardo_grid
from fracmorrey.trial import TrialFunction


def fd_gradient(prm, u, step=1e-6):
    out = np.empty(u.values.size)
    for k in range(out.size):
        e = np.zeros(out.size)
        e[k] = step
        fp, _ = discrete_energy_and_gradient(prm, u.with_values(u.values + e))
        fm, _ = discrete_energy_and_gradient(prm, u.with_values(u.values - e))
        out[k] = (fp - fm) / (2.0 * step)
    return out


# ---------------------------------------------------------------------------
# problem setup


def test_pinned_problem_validation():
    prm = FracParams(1, 0.8, 2.0)
    with pytest.raises(DomainError):
        PinnedProblem(prm, 4.0, 129, 0.0, 0.0)
    with pytest.raises(DomainError):
        PinnedProblem(prm, 4.0, 129, 0.0, 1.0, a=1.0, b=1.0)
    with pytest.raises(DomainError):
        PinnedProblem(prm, 4.0, 129, 0.0, 0.0625)  # one cell apart
    with pytest.raises(DomainError):
        PinnedProblem(prm, 4.0, 129, 0.0, 0.03)  # not a node
    with pytest.raises(DomainError):
        PinnedProblem(prm, 4.0, 129, 0.0, 5.0)
    with pytest.raises(DomainError):
        solve_pinned(PinnedProblem(prm, 4.0, 129, 0.0, 1.0), SolverConfig(method="simplex"))


# ---------------------------------------------------------------------------
# gradients


@given(st.integers(0, 10 ** 6))
def test_gradient_matches_finite_differences_uniform(seed):
    rng = np.random.default_rng(seed)
    p = float(rng.uniform(2.0, 6.0))
    prm = FracParams(1, float(rng.uniform(1.05 / p, 0.95)), p)
    u = GridFunction(1, 1.0, 17, rng.standard_normal(17))
    _, g = discrete_energy_and_gradient(prm, u)
    fd = fd_gradient(prm, u)
    assert np.max(np.abs(g - fd)) <= 1e-5 * np.max(np.abs(g))


def test_gradient_matches_finite_differences_graded_and_2d():
    rng = np.random.default_rng(1)
    prm = FracParams(1, 0.8, 3.0)
    x = centre_graded_nodes(1.0, 0.5, h_max=0.125)
    u = GridFunction.on_nodes(lambda t: rng.standard_normal(t.size), x)
    _, g = discrete_energy_and_gradient(prm, u)
    assert np.max(np.abs(g - fd_gradient(prm, u))) <= 1e-5 * np.max(np.abs(g))
    prm2 = FracParams(2, 0.9, 4.0)
    v = GridFunction(2, 1.0, 5, rng.standard_normal(25))
    _, g2 = discrete_energy_and_gradient(prm2, v)
    assert np.max(np.abs(g2 - fd_gradient(prm2, v))) <= 1e-5 * np.max(np.abs(g2))


def test_energy_matches_box_seminorm():
    prm = FracParams(1, 0.8, 3.0)
    u = GridFunction.sample(lambda x: np.cos(x), 1, 1.0, 33)
    e, _ = discrete_energy_and_gradient(prm, u)
    assert e == pytest.approx(gagliardo_grid(prm, u, exterior="none").raisedToP, rel=1e-12)


# ---------------------------------------------------------------------------
# pinned extremals


@pytest.mark.parametrize("p", [2.0, 3.0])
def test_local_case_gives_one(p):
    sol = solve_pinned(PinnedProblem(FracParams(1, 1.0, p), 4.0, 513, 0.0, 1.0))
    assert sol.converged
    assert sol.morreyEstimate == pytest.approx(1.0, rel=1e-10)


@pytest.fixture(scope="module")
def solved():
    prm = FracParams(1, 0.8, 3.0)
    problem = PinnedProblem(prm, 4.0, 513, 0.0, 1.0)
    return problem, solve_pinned(problem), solve_pinned(problem, SolverConfig(init="random"))


def test_two_initialisations_agree(solved):
    problem, a, b = solved
    assert a.converged and b.converged
    assert np.max(np.abs(a.u.values - b.u.values)) <= 1e-6 * abs(problem.a - problem.b)
    assert a.morreyEstimate == pytest.approx(b.morreyEstimate, rel=1e-10)


def test_argmax_is_the_pinned_pair(solved):
    problem, a, b = solved
    assert a.argmaxPair == problem.pinned_indices() == b.argmaxPair


def test_maximum_principle(solved):
    problem, a, _ = solved
    assert max_principle_violation(a, problem) <= 1e-8


def test_euler_lagrange_structure(solved):
    problem, a, _ = solved
    el = el_residual(problem.params, a, problem)
    assert el.relativeFree <= 1e-4
    assert el.ratio == pytest.approx(-1.0, abs=1e-6)
    assert el.massNormalized == pytest.approx(1.0, rel=1e-8)


def test_regularity_diagnostic_stays_bounded(solved):
    problem, a, _ = solved
    rep = regularity_diagnostic(a, problem)
    vals = list(rep["ratios"].values())
    assert rep["exponent"] == pytest.approx(0.9 * problem.params.beta)
    assert all(np.isfinite(vals))
    assert max(vals) <= 2.0 * vals[0]


def test_translation_and_scaling_invariance():
    prm = FracParams(1, 0.8, 3.0)
    L, n = 4.0, 257
    h = 2.0 * L / (n - 1)
    base = solve_pinned(PinnedProblem(prm, L, n, 0.0, 1.0))
    k, C = 7, -2.5
    shift = k * h
    moved = solve_pinned(PinnedProblem(prm, L, n, shift, 1.0 + shift, a=0.0, b=C, origin=shift))
    assert moved.morreyEstimate == pytest.approx(base.morreyEstimate, rel=1e-8)
    assert np.max(np.abs(moved.u.values - C * base.u.values)) <= 1e-8 * abs(C)


def test_newton_and_accelerated_gradient_agree():
    prm = FracParams(1, 0.8, 2.0)
    problem = PinnedProblem(prm, 2.0, 33, 0.0, 0.5)
    a = solve_pinned(problem)
    b = solve_pinned(problem, SolverConfig(method="agd", gtol=1e-9))
    assert b.converged
    assert b.morreyEstimate == pytest.approx(a.morreyEstimate, rel=1e-6)


def test_subquadratic_p():
    prm = FracParams(1, 0.9, 1.5)
    problem = PinnedProblem(prm, 4.0, 257, 0.0, 1.0)
    sol = solve_pinned(problem)
    assert sol.converged
    assert sol.argmaxPair == problem.pinned_indices()
    assert max_principle_violation(sol, problem) <= 1e-8


def test_two_dimensional_pinned_problem():
    prm = FracParams(2, 0.9, 4.0)
    problem = PinnedProblem(prm, 2.0, 17, (0.0, 0.0), (1.0, 0.0))
    sol = solve_pinned(problem)
    assert sol.converged
    assert sol.argmaxPair == problem.pinned_indices()
    assert max_principle_violation(sol, problem) <= 1e-8


# ---------------------------------------------------------------------------
# Lambda and the lower bound


def test_graded_nodes():
    x = centre_graded_nodes(1.0, 0.5, h_max=1.0 / 64.0)
    assert np.all(np.diff(x) > 0)
    assert x[0] == -1.0 and x[-1] == 1.0
    assert np.allclose(x, -x[::-1])
    assert np.max(np.diff(x)) <= 1.0 / 64.0 * (1.0 + 1e-12)
    assert 0.0 in x


@given(st.integers(0, 2 ** 31))
def test_lambda_restarts_are_consistent(seed):
    lam = lambda_estimate(FracParams(1, 0.8, 2.0), restarts=2, seed=seed, h_max=1.0 / 32.0)
    assert lam.spread <= 1.0 + 1e-8 and not lam.multiBasin


def test_lambda_inverse_and_descent_agree():
    for p in (2.0, 3.0):
        prm = FracParams(1, 0.8, p)
        a = lambda_estimate(prm, restarts=1, graded=False, n=65)
        b = lambda_estimate(prm, restarts=1, graded=False, n=65, method="descent")
        assert b.value >= a.value * (1.0 - 1e-10)
        assert b.value == pytest.approx(a.value, rel=1e-6)


def test_graded_mesh_lowers_the_estimate():
    prm = FracParams(1, 0.8, 2.0)
    uniform = lambda_estimate(prm, restarts=1, graded=False, n=257).value
    graded = lambda_estimate(prm, restarts=1).value
    assert graded < uniform


def test_lambda_scales_with_the_radius():
    prm = FracParams(1, 0.8, 2.0)
    a = lambda_estimate(prm, restarts=1)
    b = lambda_estimate(prm, radius=2.0, restarts=1)
    assert b.value == pytest.approx(a.value * 2.0 ** (-prm.sp), rel=1e-10)
    assert morrey_lower_bound(prm, b) == pytest.approx(morrey_lower_bound(prm, a), rel=1e-10)


def test_lambda_rejects_the_local_case():
    with pytest.raises(DomainError):
        lambda_estimate(FracParams(1, 1.0, 2.0))


@pytest.mark.parametrize("s,p", [(0.7, 2.0), (0.9, 3.0)])
def test_lower_bound_below_pinned_estimate(s, p):
    prm = FracParams(1, s, p)
    lam = lambda_estimate(prm, restarts=1)
    lower = morrey_lower_bound(prm, lam)
    assert lower == pytest.approx(theta_constant(prm).value * lam.value)
    m = solve_pinned(PinnedProblem(prm, 4.0, 1025, 0.0, 1.0)).morreyEstimate
    assert 0.0 < lower <= m * 1.1


def test_lambda_2d():
    prm = FracParams(2, 0.9, 4.0)
    lam = lambda_estimate(prm, n=17, restarts=1)
    assert lam.value > 0.0 and lam.minimizer.dim == 2


# ---------------------------------------------------------------------------
# pointwise bound


@pytest.fixture(scope="module")
def lam_08_3():
    return lambda_estimate(FracParams(1, 0.8, 3.0), restarts=1)


def test_pointwise_bound_on_translated_zeta(lam_08_3):
    prm = FracParams(1, 0.8, 3.0)
    u = TrialFunction.zeta(prm).sample(2.0, 513, center=-0.25)
    rep = pointwise_bound_check(prm, lam_08_3, u, 1.0, 0.75)
    assert rep.nodes > 0 and rep.violations == 0


def test_pointwise_bound_on_zero(lam_08_3):
    prm = FracParams(1, 0.8, 3.0)
    u = GridFunction(1, 1.0, 65, np.zeros(65))
    rep = pointwise_bound_check(prm, lam_08_3, u, 0.0, 0.5)
    assert rep.violations == 0 and rep.worstRatio == 0.0


def test_pointwise_bound_on_a_pinned_solution(lam_08_3):
    prm = FracParams(1, 0.8, 3.0)
    sol = solve_pinned(PinnedProblem(prm, 4.0, 513, 0.0, 1.0))
    x = sol.u.axis()
    k = int(np.argmin(np.abs(x - 0.5)))
    u = sol.u.with_values(sol.u.values - sol.u.values[k])
    rep = pointwise_bound_check(prm, lam_08_3, u, x[k], 1.5)
    assert rep.violations == 0
    with pytest.raises(DomainError):
        pointwise_bound_check(prm, lam_08_3, sol.u, x[k], 1.5)


@pytest.mark.parametrize("p", [2.0, 3.0, 5.0])
def test_hessian_matches_finite_differences(p):
    from fracmorrey import _kernels
    from fracmorrey.extremal import dense_weights

    prm = FracParams(1, 0.8, p)
    rng = np.random.default_rng(int(p))
    u = GridFunction(1, 1.0, 9, rng.standard_normal(9))
    W = dense_weights(prm, u)
    H = _kernels.dense_hessian(u.values, W, p, 0.0)
    step = 1e-6
    fd = np.empty_like(H)
    for k in range(9):
        e = np.zeros(9)
        e[k] = step
        _, gp = _kernels.dense_energy_grad(u.values + e, W, p)
        _, gm = _kernels.dense_energy_grad(u.values - e, W, p)
        fd[:, k] = (gp - gm) / (2.0 * step)
    assert np.max(np.abs(H - fd)) <= 1e-5 * np.max(np.abs(H))
    assert np.allclose(H, H.T)
