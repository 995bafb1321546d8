"""Drift of the pinned estimate with the box half-width L at fixed spacing."""

import argparse

from fracmorrey.extremal import PinnedProblem, solve_pinned
from fracmorrey.params import FracParams


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--h", type=float, default=1.0 / 128.0)
    ap.add_argument("--cases", default="0.7:2,0.8:4", help="comma-separated s:p pairs")
    args = ap.parse_args()
    for case in args.cases.split(","):
        s, p = (float(v) for v in case.split(":"))
        prm = FracParams(1, s, p)
        vals = []
        for L in (4.0, 8.0, 16.0):
            n = int(round(2.0 * L / args.h)) + 1
            vals.append(solve_pinned(PinnedProblem(prm, L, n, 0.0, 1.0)).morreyEstimate)
        drift = (max(vals) - min(vals)) / vals[-1]
        print(f"s={s:g} p={p:g}  L=4,8,16: " + ", ".join(f"{v:.6f}" for v in vals) + f"  drift {drift:.2%}")


if __name__ == "__main__":
    main()
