"""Run the three asymptotic sweeps and print their records and fits."""

import argparse

from fracmorrey import asym


def show(recs):
    for r in recs:
        ext = "" if r.extremalEstimate is None else f" m={r.extremalEstimate:.6f}"
        print(f"  x={r.abscissa:<8.4g} lower={r.lower:.6g} upper={r.upper:.6g}{ext} "
              f"normalized={r.normalized:.6g} {' '.join(r.flags)}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--joint", action="store_true", help="also run the exploratory joint limit")
    args = ap.parse_args()

    recs, fl, fu = asym.sweep_s_to_boundary(1, 2.0, (0.505, 0.51, 0.52, 0.54, 0.58, 0.66),
                                            workers=args.workers)
    print("s -> N/p  (N=1, p=2), abscissa s p - N")
    show(recs)
    print(f"  fit lower slope {fl.slope:.4f} R2 {fl.rSquared:.4f}; upper slope {fu.slope:.4f} R2 {fu.rSquared:.4f}")

    for eps in (0.1, 0.05):
        recs = asym.sweep_p_to_infinity(1, 0.9, (8.0, 16.0, 32.0), eps=eps, workers=args.workers)
        tr = asym.root_trend(recs)
        print(f"p -> inf (N=1, s=0.9, cone eps={eps:g})")
        print("  (theta Lambda)^(1/p): " + ", ".join(f"{v:.4f}" for v in tr.lowerRoots))
        print("  upper^(1/p):          " + ", ".join(f"{v:.4f}" for v in tr.upperRoots))

    res = asym.sweep_s_to_one(1, 2.0, (0.9, 0.95, 0.98, 0.99), workers=args.workers)
    print("s -> 1 (N=1, p=2), normalized (1-s) m_est, target", res.target)
    show(res.records)
    print(f"  BBM ratio {res.bbmRatio:.6f}; sup distance to the s=1 solution {res.supDistance:.4f}")

    if args.joint:
        print("joint limit (exploratory), abscissa s, normalized upper^(1/p)")
        show(asym.sweep_joint(1, (0.6, 0.5, 0.4, 0.3), workers=args.workers))


if __name__ == "__main__":
    main()
