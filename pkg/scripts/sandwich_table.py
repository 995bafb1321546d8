"""Lower bound, pinned estimate and zeta upper bound on the 1-D battery."""

import argparse
import time

from fracmorrey.extremal import PinnedProblem, lambda_estimate, morrey_lower_bound, solve_pinned
from fracmorrey.params import FracParams
from fracmorrey.trial import TrialFunction, morrey_upper_bound


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1025)
    ap.add_argument("--L", type=float, default=4.0)
    ap.add_argument("--restarts", type=int, default=2)
    args = ap.parse_args()
    print(f"{'p':>4} {'s':>5} {'theta*Lambda':>13} {'m_est':>10} {'zeta bound':>11} {'sec':>6}")
    for p in (2.0, 4.0):
        for s in (0.7, 0.8, 0.9):
            t = time.perf_counter()
            prm = FracParams(1, s, p)
            lower = morrey_lower_bound(prm, lambda_estimate(prm, restarts=args.restarts))
            m = solve_pinned(PinnedProblem(prm, args.L, args.n, 0.0, 1.0)).morreyEstimate
            upper = morrey_upper_bound(prm, TrialFunction.zeta(prm)).bound
            print(f"{p:4g} {s:5g} {lower:13.6f} {m:10.6f} {upper:11.6f} {time.perf_counter() - t:6.2f}")


if __name__ == "__main__":
    main()
