"""Acceptance battery shared by ``fracmorrey check`` and the test suite.

Every check returns a ``CheckOutcome``; none raises on a failed criterion.
Pinned solves of the sandwich battery are cached per process so that the
structural check on extremals reuses them.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .asym import bbm_ratio, default_reference_bump, root_trend, sweep_p_to_infinity, sweep_s_to_boundary
from .extremal import (
    PinnedProblem,
    SolverConfig,
    discrete_energy_and_gradient,
    el_residual,
    lambda_estimate,
    max_principle_violation,
    morrey_lower_bound,
    solve_pinned,
)
from .hardy import hardy_rate_scan
from .params import FracParams, phi_kernel, psi_kernel
from .quadrature import GridFunction
from .trial import TrialFunction, morrey_upper_bound, zeta_holder_grid_check

SANDWICH_GRID = tuple((p, s) for p in (2.0, 4.0) for s in (0.7, 0.8, 0.9))
BOUNDARY_GRID = (0.505, 0.51, 0.52, 0.54, 0.58, 0.66)
HARDY_GRID = (0.505, 0.51, 0.52, 0.54, 0.58)


@dataclass
class CheckOutcome:
    id: str
    passed: bool
    summary: str
    seconds: float
    budget: float
    details: dict = field(default_factory=dict)

    @property
    def withinBudget(self) -> bool:
        return self.seconds <= self.budget

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{self.id:6s} {tag}  {self.summary}  [{self.seconds:.1f}s / {self.budget:.0f}s]"


def _timed(cid, budget, fn):
    t = time.perf_counter()
    ok, summary, details = fn()
    dt = time.perf_counter() - t
    return CheckOutcome(cid, bool(ok) and dt <= budget, summary, dt, budget, details)


# ---------------------------------------------------------------------------


def check_local_calibration() -> CheckOutcome:
    def run():
        vals = {}
        worst = 0.0
        for p in (2.0, 3.0):
            t = time.perf_counter()
            sol = solve_pinned(PinnedProblem(FracParams(1, 1.0, p), 4.0, 2049, 0.0, 1.0))
            dt = time.perf_counter() - t
            vals[p] = (sol.morreyEstimate, dt)
            worst = max(worst, abs(sol.morreyEstimate - 1.0))
            if dt > 60.0:
                worst = math.inf
        s = ", ".join(f"p={p:g}: m={m:.6f}" for p, (m, _) in vals.items())
        return worst <= 0.05, s, {"estimates": {str(p): m for p, (m, _) in vals.items()}}

    return _timed("AC-1", 120.0, run)


_SANDWICH_CACHE: dict = {}


def _sandwich_case(p: float, s: float):
    key = (p, s)
    if key not in _SANDWICH_CACHE:
        prm = FracParams(1, s, p)
        problem = PinnedProblem(prm, 4.0, 1025, 0.0, 1.0)
        ramp = solve_pinned(problem)
        rand = solve_pinned(problem, SolverConfig(init="random"))
        lam = lambda_estimate(prm, restarts=2)
        lower = morrey_lower_bound(prm, lam)
        upper = morrey_upper_bound(prm, TrialFunction.zeta(prm)).bound
        _SANDWICH_CACHE[key] = (problem, ramp, rand, lower, upper)
    return _SANDWICH_CACHE[key]


def check_sandwich() -> CheckOutcome:
    def run():
        ok = True
        rows = {}
        for p, s in SANDWICH_GRID:
            _, sol, _, lower, upper = _sandwich_case(p, s)
            m = sol.morreyEstimate
            good = lower <= m * 1.15 and m <= upper * 1.15
            ok &= good
            rows[f"p={p:g},s={s:g}"] = (lower, m, upper)
        worst = max(max(lo / m, m / up) for lo, m, up in rows.values())
        return ok, f"6 cases, worst ratio {worst:.3f} (gate 1.15)", {"rows": rows}

    return _timed("AC-2", 600.0, run)


def check_boundary_rate() -> CheckOutcome:
    def run():
        _, fl, fu = sweep_s_to_boundary(1, 2.0, BOUNDARY_GRID)
        ok = all(0.85 <= f.slope <= 1.15 and f.rSquared >= 0.9 for f in (fl, fu))
        s = (f"lower slope {fl.slope:.4f} (R2 {fl.rSquared:.4f}), "
             f"upper slope {fu.slope:.4f} (R2 {fu.rSquared:.4f})")
        return ok, s, {"lower": fl, "upper": fu}

    return _timed("AC-3", 600.0, run)


def check_hardy_rate() -> CheckOutcome:
    def run():
        scan = hardy_rate_scan(FracParams(1, HARDY_GRID[0], 2.0), HARDY_GRID)
        ok = abs(scan.slope - 2.0) <= 0.2 and scan.spread <= 5.0
        return ok, f"slope {scan.slope:.4f}, spread {scan.spread:.3f}", {"rows": scan.rows}

    return _timed("AC-4", 120.0, run)


def check_p_to_infinity() -> CheckOutcome:
    def run():
        recs = sweep_p_to_infinity(1, 0.9, (8.0, 16.0, 32.0))
        tr = root_trend(recs)
        lo, up = tr.lowerRoots[-1], tr.upperRoots[-1]
        ok = (0.75 <= lo <= 1.25 and 0.75 <= up <= 1.25 and tr.lowerShrinking and tr.upperShrinking)
        s = (f"lower roots {', '.join(f'{v:.4f}' for v in tr.lowerRoots)}; "
             f"upper roots {', '.join(f'{v:.4f}' for v in tr.upperRoots)}")
        return ok, s, {"trend": tr}

    return _timed("AC-5", 900.0, run)


def check_bbm() -> CheckOutcome:
    def run():
        r = bbm_ratio(FracParams(1, 0.99, 2.0), default_reference_bump())
        return 0.9 <= r <= 1.1, f"ratio {r:.6f}", {"ratio": r}

    return _timed("AC-6", 120.0, run)


def check_s_to_one() -> CheckOutcome:
    def run():
        sol = solve_pinned(PinnedProblem(FracParams(1, 0.99, 2.0), 4.0, 2049, 0.0, 1.0))
        v = 0.01 * sol.morreyEstimate
        return abs(v - 1.0) <= 0.2, f"(1-s) m = {v:.6f} at s = 0.99 (target 1)", {"value": v}

    return _timed("AC-7", 600.0, run)


def check_extremal_structure() -> CheckOutcome:
    def run():
        worst = {"maxPrinciple": 0.0, "relativeFree": 0.0, "ratio": 0.0, "agreement": 0.0}
        ok = True
        for p, s in SANDWICH_GRID:
            problem, ramp, rand, _, _ = _sandwich_case(p, s)
            for sol in (ramp, rand):
                if not sol.converged:
                    ok = False
                    continue
                el = el_residual(problem.params, sol, problem)
                worst["maxPrinciple"] = max(worst["maxPrinciple"], max_principle_violation(sol, problem))
                worst["relativeFree"] = max(worst["relativeFree"], el.relativeFree)
                worst["ratio"] = max(worst["ratio"], abs(el.ratio + 1.0))
                ok &= tuple(sol.argmaxPair) == tuple(problem.pinned_indices())
            agree = float(np.max(np.abs(ramp.u.values - rand.u.values))) / abs(problem.a - problem.b)
            worst["agreement"] = max(worst["agreement"], agree)
        ok &= (worst["maxPrinciple"] <= 1e-8 and worst["relativeFree"] <= 1e-4
               and worst["ratio"] <= 1e-6 and worst["agreement"] <= 1e-6)
        s = ", ".join(f"{k} {v:.2e}" for k, v in worst.items())
        return ok, s + ", argmax = pins" if ok else s, worst

    return _timed("AC-8", 600.0, run)


def check_gradient(instances: int = 20, seed: int = 7) -> CheckOutcome:
    def run():
        rng = np.random.default_rng(seed)
        worst = 0.0
        step = 1e-6
        for _ in range(instances):
            p = float(rng.uniform(2.0, 6.0))
            s = float(rng.uniform(1.05 / p, 0.95))
            prm = FracParams(1, s, p)
            n = int(rng.integers(9, 33))
            u = GridFunction.sample(lambda x: 0.0 * x, 1, 1.0, n).with_values(rng.standard_normal(n))
            _, g = discrete_energy_and_gradient(prm, u)
            fd = np.empty(n)
            for k in range(n):
                e = np.zeros(n)
                e[k] = step
                fp, _ = discrete_energy_and_gradient(prm, u.with_values(u.values + e))
                fm, _ = discrete_energy_and_gradient(prm, u.with_values(u.values - e))
                fd[k] = (fp - fm) / (2.0 * step)
            worst = max(worst, float(np.max(np.abs(g - fd)) / np.max(np.abs(g))))
        return worst <= 1e-4, f"{instances} instances, max relative error {worst:.2e}", {"worst": worst}

    return _timed("AC-9", 10.0, run)


def check_kernel_identities() -> CheckOutcome:
    def run():
        radii = np.geomspace(0.05, 4.0, 10)
        worst_sym = worst_scale = worst_phi = 0.0
        for dim, s, p in ((1, 0.75, 2.0), (2, 0.75, 4.0)):
            prm = FracParams(dim, s, p)
            q = dim + prm.sp
            for i, rho in enumerate(radii):
                for j, r in enumerate(radii):
                    if i == j:
                        continue
                    a = psi_kernel(prm, rho, r).value
                    b = psi_kernel(prm, r, rho).value
                    c = psi_kernel(prm, 2.5 * rho, 2.5 * r).value
                    worst_sym = max(worst_sym, abs(a - b) / abs(a))
                    worst_scale = max(worst_scale, abs(c * 2.5 ** q - a) / abs(a))
                    lo, hi = min(rho, r), max(rho, r)
                    ph = hi ** (-q) * phi_kernel(prm, lo / hi).value
                    worst_phi = max(worst_phi, abs(ph - a) / abs(a))
        zs = [abs(zeta_holder_grid_check(FracParams(1, s, p)) - 1.0)
              for s, p in ((0.75, 2.0), (0.8, 4.0), (0.9, 3.0))]
        z = max(zs)
        ok = max(worst_sym, worst_scale, worst_phi) <= 1e-8 and z <= 1e-3
        s = (f"symmetry {worst_sym:.1e}, scaling {worst_scale:.1e}, Phi form {worst_phi:.1e}, "
             f"zeta Hoelder |1 - grid| {z:.1e}")
        return ok, s, {"symmetry": worst_sym, "scaling": worst_scale, "zeta": z}

    return _timed("AC-10", 120.0, run)


CHECKS = {
    "AC-1": check_local_calibration,
    "AC-2": check_sandwich,
    "AC-3": check_boundary_rate,
    "AC-4": check_hardy_rate,
    "AC-5": check_p_to_infinity,
    "AC-6": check_bbm,
    "AC-7": check_s_to_one,
    "AC-8": check_extremal_structure,
    "AC-9": check_gradient,
    "AC-10": check_kernel_identities,
}
SUITES = {
    "fast": ("AC-1", "AC-4", "AC-6", "AC-7", "AC-9", "AC-10"),
    "full": tuple(CHECKS),
}


def run_suite(name: str = "fast", echo=None) -> list:
    out = []
    for cid in SUITES[name]:
        res = CHECKS[cid]()
        if echo is not None:
            echo(res.line())
        out.append(res)
    return out
