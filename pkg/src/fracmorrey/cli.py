"""Command-line front end.

Each command writes a JSON envelope (config echo, payload, versions, wall time)
to ``<out>.json`` or stdout; sweeps also write ``<out>.csv``.  Flags override
values from ``--config``, which accepts either a plain JSON object or a
previous envelope (its ``config`` member is used).

Exit codes: 0 success, 2 config error, 3 numeric failure, 4 acceptance failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time

import numpy as np
import scipy

from . import __version__
from .params import DomainError, FracParams, NumericFailure

SCHEMA = "fracmorrey.envelope/1"
CSV_SCHEMA = "fracmorrey.sweep/1"
DEFAULT_SEED = 20240917
WORKERS_ENV = "FRACMORREY_WORKERS"
CSV_COLUMNS = ("abscissa", "lower", "upper", "extremalEstimate", "normalized", "flags")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_ACCEPTANCE = 0, 2, 3, 4

REGIMES = {
    "s-to-boundary": "sDownToNOverP",
    "p-to-infinity": "pToInfinity",
    "s-to-one": "sUpToOne",
    "joint": "jointLimit",
}
DEFAULT_GRIDS = {
    "s-to-boundary": [0.505, 0.51, 0.52, 0.54, 0.58, 0.66],
    "p-to-infinity": [8.0, 16.0, 32.0],
    "s-to-one": [0.9, 0.95, 0.99],
    "joint": [0.5, 0.3, 0.2],
}

# every key a command may read, with its default; flags left unset fall back here
DEFAULTS = {
    "dim": 1,
    "s": None,
    "p": None,
    "seed": DEFAULT_SEED,
    "out": None,
    "workers": None,
    "rtol": 1e-11,
    "tol": 1e-11,
    "radius": 1.0,
    "n": None,
    "restarts": 4,
    "method": None,
    "trial": "zeta",
    "eps": 0.1,
    "x0": 0.0,
    "y0": 1.0,
    "a": 0.0,
    "b": 1.0,
    "L": 4.0,
    "init": "ramp",
    "gtol": 1e-12,
    "regime": "s-to-boundary",
    "grid": None,
    "extremal": False,
    "excess": 0.5,
    "suite": "fast",
}


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _common(sp: argparse.ArgumentParser, need_s=True):
    sp.add_argument("--config", help="JSON config file (plain object or a previous envelope)")
    sp.add_argument("--out", help="output name; writes <out>.json (and <out>.csv for sweeps)")
    sp.add_argument("--dim", type=int, help="space dimension N (default 1)")
    if need_s:
        sp.add_argument("--s", type=float, help="smoothness 0 < s <= 1")
    sp.add_argument("--p", type=float, help="integrability p > 1, with s p > N")
    sp.add_argument("--seed", type=int, help=f"random seed (default {DEFAULT_SEED})")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="fracmorrey", description="Sharp fractional Morrey constant laboratory.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    sp = sub.add_parser("hardy", help="sharp fractional Hardy constant")
    _common(sp)
    sp.add_argument("--rtol", type=float, help="quadrature relative tolerance (default 1e-11)")

    sp = sub.add_parser("theta", help="the constant theta_{N,s,p}")
    _common(sp)
    sp.add_argument("--tol", type=float, help="golden-section tolerance in log10(T-1) (default 1e-11)")

    sp = sub.add_parser("lambda", help="Poincare-type constant Lambda on a ball")
    _common(sp)
    sp.add_argument("--radius", type=float, help="ball radius (default 1)")
    sp.add_argument("--n", type=int, help="2-D grid size (default 257; 1-D uses a graded mesh)")
    sp.add_argument("--restarts", type=int, help="random restarts (default 4)")
    sp.add_argument("--method", choices=("inverse", "descent"), help="default inverse")

    sp = sub.add_parser("bound", help="trial-function upper bound")
    _common(sp)
    sp.add_argument("--trial", choices=("zeta", "smooth-cone", "truncated-fundamental"),
                    help="default zeta")
    sp.add_argument("--eps", type=float, help="smoothing of the cone trial (default 0.1)")

    sp = sub.add_parser("extremal", help="two-point pinned minimisation")
    _common(sp)
    sp.add_argument("--x0", type=float, help="first pinned point (default 0)")
    sp.add_argument("--y0", type=float, help="second pinned point (default 1)")
    sp.add_argument("--a", type=float, help="value at x0 (default 0)")
    sp.add_argument("--b", type=float, help="value at y0 (default 1)")
    sp.add_argument("--L", type=float, help="box half-width (default 4)")
    sp.add_argument("--n", type=int, help="nodes per axis (default 1025)")
    sp.add_argument("--method", choices=("newton", "agd"), help="default newton")
    sp.add_argument("--init", choices=("ramp", "random"), help="default ramp")
    sp.add_argument("--gtol", type=float, help="relative gradient tolerance (default 1e-12)")

    sp = sub.add_parser("sweep", help="asymptotic sweep; writes a CSV table")
    _common(sp)
    sp.add_argument("--regime", choices=tuple(REGIMES), help="default s-to-boundary")
    sp.add_argument("--grid", help="comma-separated abscissae (s or p); regime default otherwise")
    sp.add_argument("--eps", type=float, help="cone smoothing for p-to-infinity (default 0.1)")
    sp.add_argument("--restarts", type=int, help="Lambda restarts per point (default 4)")
    sp.add_argument("--n", type=int, help="pinned-solve grid size (default 1025, s-to-one 2049)")
    sp.add_argument("--L", type=float, help="pinned-solve box half-width (default 4)")
    sp.add_argument("--extremal", action="store_const", const=True,
                    help="also run pinned solves on the boundary sweep")
    sp.add_argument("--excess", type=float, help="joint limit: s p - N = N * excess (default 0.5)")
    sp.add_argument("--workers", type=int,
                    help=f"worker processes (env {WORKERS_ENV}; default: logical cores)")

    sp = sub.add_parser("bbm", help="BBM constant K_{p,N} and the seminorm ratio check")
    _common(sp)

    sp = sub.add_parser("check", help="acceptance battery")
    sp.add_argument("--suite", choices=("fast", "full"), help="default fast")
    sp.add_argument("--out", help="output name for the JSON report")
    sp.add_argument("--config", help="JSON config file")
    return ap


# ---------------------------------------------------------------------------
# config


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if isinstance(data, dict) and "config" in data and "schema" in data:
        data = data["config"]
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return data


def _parse_grid(v):
    if v is None:
        return None
    if isinstance(v, str):
        try:
            return [float(t) for t in v.split(",") if t.strip()]
        except ValueError:
            raise ConfigError(f"bad grid {v!r}") from None
    return [float(t) for t in v]


def resolve_config(args: argparse.Namespace) -> dict:
    cmd = args.command
    file_cfg = _load_config(getattr(args, "config", None))
    unknown = set(file_cfg) - set(DEFAULTS) - {"command"}
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    if file_cfg.get("command", cmd) != cmd:
        raise ConfigError(f"config is for command {file_cfg['command']!r}, not {cmd!r}")
    cfg = {"command": cmd}
    for k, default in DEFAULTS.items():
        flag = getattr(args, k, None)
        cfg[k] = flag if flag is not None else file_cfg.get(k, default)
    cfg["grid"] = _parse_grid(cfg["grid"])
    _validate(cfg)
    return _prune(cfg)


_USED = {
    "hardy": ("dim", "s", "p", "rtol"),
    "theta": ("dim", "s", "p", "tol"),
    "lambda": ("dim", "s", "p", "radius", "n", "restarts", "method", "seed"),
    "bound": ("dim", "s", "p", "trial", "eps"),
    "extremal": ("dim", "s", "p", "x0", "y0", "a", "b", "L", "n", "method", "init", "gtol", "seed"),
    "sweep": ("dim", "s", "p", "regime", "grid", "eps", "restarts", "n", "L", "extremal", "excess",
              "seed"),
    "bbm": ("dim", "s", "p"),
    "check": ("suite",),
}


def _prune(cfg: dict) -> dict:
    cmd = cfg["command"]
    out = {"command": cmd}
    for k in _USED[cmd]:
        out[k] = cfg[k]
    out["out"] = cfg["out"]
    if cmd == "sweep":
        out["workers"] = cfg["workers"]
    return out


def _need(cfg, *keys):
    for k in keys:
        if cfg[k] is None:
            raise ConfigError(f"--{k} is required")


def _validate(cfg: dict) -> None:
    cmd = cfg["command"]
    if cmd == "check":
        return
    if cmd == "sweep":
        r = cfg["regime"]
        if r not in REGIMES:
            raise ConfigError(f"unknown regime {r!r}")
        if cfg["grid"] is None:
            cfg["grid"] = list(DEFAULT_GRIDS[r])
        if r == "p-to-infinity":
            _need(cfg, "s")
        elif r != "joint":
            _need(cfg, "p")
        if r == "s-to-one" and cfg["n"] is None:
            cfg["n"] = 2049
        if cfg["n"] is None:
            cfg["n"] = 1025
        if r != "joint":
            probe_s = cfg["s"] if r == "p-to-infinity" else cfg["grid"][0]
            probe_p = min(cfg["grid"]) if r == "p-to-infinity" else cfg["p"]
            _params(cfg["dim"], probe_s, probe_p)
        if cfg["workers"] is None:
            env = os.environ.get(WORKERS_ENV)
            try:
                cfg["workers"] = int(env) if env else (os.cpu_count() or 1)
            except ValueError:
                raise ConfigError(f"{WORKERS_ENV} must be an integer, got {env!r}") from None
        if cfg["workers"] < 1:
            raise ConfigError("workers must be positive")
        return
    if cmd == "bbm":
        _need(cfg, "p")
        if cfg["s"] is not None:
            _params(cfg["dim"], cfg["s"], cfg["p"])
        return
    _need(cfg, "s", "p")
    _params(cfg["dim"], cfg["s"], cfg["p"])
    if cmd == "lambda":
        cfg["method"] = cfg["method"] or "inverse"
        if cfg["n"] is None:
            cfg["n"] = 257
        if cfg["restarts"] < 1 or cfg["radius"] <= 0:
            raise ConfigError("restarts and radius must be positive")
    if cmd == "extremal":
        cfg["method"] = cfg["method"] or "newton"
        if cfg["n"] is None:
            cfg["n"] = 1025
        if cfg["x0"] == cfg["y0"] or cfg["a"] == cfg["b"]:
            raise ConfigError("pinned points and pinned values must be distinct")
    if cmd == "bound" and cfg["eps"] <= 0:
        raise ConfigError("eps must be positive")


def _params(dim, s, p) -> FracParams:
    try:
        return FracParams(int(dim), float(s), float(p))
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


# ---------------------------------------------------------------------------
# commands


def _f(x):
    if x is None:
        return None
    if isinstance(x, (tuple, list)):
        return [_f(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(x)


def _cmd_hardy(cfg):
    from .hardy import hardy_constant

    r = hardy_constant(_params(cfg["dim"], cfg["s"], cfg["p"]), rtol=cfg["rtol"])
    return {"constant": r.constant, "quadratureError": r.quadratureError,
            "rateNormalized": r.rateNormalized}, {"rtol": cfg["rtol"]}


def _cmd_theta(cfg):
    from .params import theta_constant

    r = theta_constant(_params(cfg["dim"], cfg["s"], cfg["p"]), tol=cfg["tol"])
    return {"theta": r.value, "tStar": r.t_star}, {"tol": cfg["tol"]}


def _cmd_lambda(cfg):
    from .extremal import lambda_estimate, morrey_lower_bound

    prm = _params(cfg["dim"], cfg["s"], cfg["p"])
    lam = lambda_estimate(prm, radius=cfg["radius"], n=cfg["n"], restarts=cfg["restarts"],
                          seed=cfg["seed"], method=cfg["method"])
    return {"lambda": lam.value, "values": _f(lam.values), "spread": lam.spread,
            "multiBasin": bool(lam.multiBasin), "lowerBound": morrey_lower_bound(prm, lam)}, {}


def _cmd_bound(cfg):
    from .trial import TrialFunction, morrey_upper_bound

    prm = _params(cfg["dim"], cfg["s"], cfg["p"])
    t = {"zeta": lambda: TrialFunction.zeta(prm),
         "smooth-cone": lambda: TrialFunction.smooth_cone(prm, cfg["eps"]),
         "truncated-fundamental": lambda: TrialFunction.truncated_fundamental(prm)}[cfg["trial"]]()
    r = morrey_upper_bound(prm, t)
    return {"trial": t.kind, "energy": r.energy, "holderSeminorm": r.holderSeminorm,
            "bound": r.bound}, {}


def _cmd_extremal(cfg):
    from .extremal import PinnedProblem, SolverConfig, el_residual, max_principle_violation, solve_pinned

    prm = _params(cfg["dim"], cfg["s"], cfg["p"])
    if prm.dim != 1:
        raise ConfigError("the extremal command takes 1-D pinned points")
    problem = PinnedProblem(prm, cfg["L"], cfg["n"], cfg["x0"], cfg["y0"], cfg["a"], cfg["b"])
    sol = solve_pinned(problem, SolverConfig(method=cfg["method"], gtol=cfg["gtol"],
                                             init=cfg["init"], seed=cfg["seed"]))
    el = el_residual(prm, sol, problem)
    pts = sol.u.points()
    i, j = sol.argmaxPair
    payload = {
        "morreyEstimate": sol.morreyEstimate,
        "energy": sol.energy,
        "holderSeminorm": sol.holderSeminorm,
        "argmaxPair": {"indices": [int(i), int(j)], "points": [float(pts[i, 0]), float(pts[j, 0])]},
        "pinnedPair": [int(k) for k in problem.pinned_indices()],
        "converged": sol.converged,
        "iterations": sol.iterations,
        "elResidualMax": sol.elResidualMax,
        "elRelativeFree": el.relativeFree,
        "pinnedRatio": el.ratio,
        "maxPrincipleViolation": max_principle_violation(sol, problem),
    }
    if not sol.converged:
        raise _Partial(payload, "pinned solve did not converge")
    return payload, {"gtol": cfg["gtol"]}


class _Partial(NumericFailure):
    def __init__(self, payload, msg):
        super().__init__(msg)
        self.payload = payload


def _records_payload(recs):
    return [{"regime": r.regime, "abscissa": r.abscissa, "lower": r.lower, "upper": r.upper,
             "extremalEstimate": r.extremalEstimate, "normalized": r.normalized,
             "flags": list(r.flags)} for r in recs]


def _fit(f):
    return {"slope": f.slope, "intercept": f.intercept, "rSquared": f.rSquared,
            "pointsUsed": f.pointsUsed}


def _cmd_sweep(cfg):
    from . import asym

    r, grid, w = cfg["regime"], cfg["grid"], cfg["workers"]
    extra = {}
    if r == "s-to-boundary":
        recs, fl, fu = asym.sweep_s_to_boundary(cfg["dim"], cfg["p"], grid, restarts=cfg["restarts"],
                                                seed=cfg["seed"], extremal=bool(cfg["extremal"]),
                                                n=cfg["n"], L=cfg["L"], workers=w)
        extra = {"fitLower": _fit(fl), "fitUpper": _fit(fu)}
    elif r == "p-to-infinity":
        recs = asym.sweep_p_to_infinity(cfg["dim"], cfg["s"], grid, eps=cfg["eps"],
                                        restarts=cfg["restarts"], seed=cfg["seed"], workers=w)
        tr = asym.root_trend(recs)
        extra = {"lowerRoots": list(tr.lowerRoots), "upperRoots": list(tr.upperRoots),
                 "lowerShrinking": tr.lowerShrinking, "upperShrinking": tr.upperShrinking}
    elif r == "s-to-one":
        res = asym.sweep_s_to_one(cfg["dim"], cfg["p"], grid, n=cfg["n"], L=cfg["L"],
                                  restarts=cfg["restarts"], seed=cfg["seed"], workers=w)
        recs = res.records
        extra = {"target": res.target, "bbmRatio": res.bbmRatio, "supDistance": res.supDistance}
    else:
        recs = asym.sweep_joint(cfg["dim"], grid, excess=cfg["excess"], restarts=cfg["restarts"],
                                seed=cfg["seed"], workers=w)
        recs = sorted(recs, key=lambda rec: rec.abscissa)
    payload = {"records": _records_payload(recs), **extra}
    return payload, {"sandwichSlack": asym.SANDWICH_SLACK}, recs


def _cmd_bbm(cfg):
    from .asym import bbm_ratio, default_reference_bump
    from .params import bbm_constant

    K = bbm_constant(FracParams(cfg["dim"], 1.0, cfg["p"]))
    payload = {"K": K}
    if cfg["s"] is not None:
        if cfg["dim"] != 1:
            raise ConfigError("the seminorm ratio check is 1-D")
        payload["ratio"] = bbm_ratio(_params(1, cfg["s"], cfg["p"]), default_reference_bump())
    return payload, {}


def _cmd_check(cfg):
    from .checks import run_suite

    res = run_suite(cfg["suite"], echo=lambda line: print(line, file=sys.stderr))
    payload = {"results": [{"id": r.id, "passed": r.passed, "summary": r.summary,
                            "seconds": r.seconds} for r in res],
               "failed": [r.id for r in res if not r.passed]}
    return payload, {}


COMMANDS = {"hardy": _cmd_hardy, "theta": _cmd_theta, "lambda": _cmd_lambda, "bound": _cmd_bound,
            "extremal": _cmd_extremal, "sweep": _cmd_sweep, "bbm": _cmd_bbm, "check": _cmd_check}


# ---------------------------------------------------------------------------
# output


def _num(x) -> str:
    if x is None:
        return ""
    return repr(float(x))


def sweep_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow([_num(r.abscissa), _num(r.lower), _num(r.upper), _num(r.extremalEstimate),
                    _num(r.normalized), ";".join(r.flags)])
    return buf.getvalue()


def _clean(x):
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating, float)):
        v = float(x)
        return v if math.isfinite(v) else repr(v)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def envelope(cfg, payload, tolerances, seconds, status="ok", error=None) -> dict:
    env = {
        "schema": SCHEMA,
        "versions": {"fracmorrey": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
                     "python": sys.version.split()[0]},
        "command": cfg["command"],
        "config": cfg,
        "status": status,
        "payload": payload,
        "tolerances": tolerances,
        "wallTime": seconds,
    }
    if error is not None:
        env["error"] = error
    return _clean(env)


def _emit(cfg, env, records=None):
    text = json.dumps(env, indent=2, sort_keys=False) + "\n"
    out = cfg.get("out")
    if out:
        with open(out + ".json", "w") as fh:
            fh.write(text)
        if records is not None:
            with open(out + ".csv", "w") as fh:
                fh.write(sweep_csv(records))
    else:
        sys.stdout.write(text)


def run(cfg: dict) -> tuple[int, dict]:
    """Dispatch a resolved config; returns (exit code, envelope)."""
    fn = COMMANDS[cfg["command"]]
    t = time.perf_counter()
    records = None
    try:
        out = fn(cfg)
    except ConfigError:
        raise
    except _Partial as exc:
        env = envelope(cfg, exc.payload, {}, time.perf_counter() - t, "numericFailure", str(exc))
        _emit(cfg, env)
        return EXIT_NUMERIC, env
    except (NumericFailure, FloatingPointError, np.linalg.LinAlgError) as exc:
        env = envelope(cfg, {}, {}, time.perf_counter() - t, "numericFailure", str(exc))
        _emit(cfg, env)
        return EXIT_NUMERIC, env
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    if len(out) == 3:
        payload, tol, records = out
    else:
        payload, tol = out
    code = EXIT_OK
    status = "ok"
    if cfg["command"] == "check" and payload["failed"]:
        code, status = EXIT_ACCEPTANCE, "acceptanceFailure"
    env = envelope(cfg, payload, tol, time.perf_counter() - t, status)
    _emit(cfg, env, records)
    return code, env


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if args.command is None:
            raise ConfigError("a command is required")
        cfg = resolve_config(args)
        code, env = run(cfg)
    except ConfigError as exc:
        msg = " ".join(str(exc).split())
        print(f"fracmorrey: config error: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    if code == EXIT_ACCEPTANCE:
        print("fracmorrey: acceptance failure: " + ",".join(env["payload"]["failed"]), file=sys.stderr)
    elif code == EXIT_NUMERIC:
        print(f"fracmorrey: numeric failure: {env.get('error', '')}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
