"""Grid seminorm of zeta against the radial route, with a known-rate extrapolation.

The grid error decays like h^beta with beta = (sp - N)/(p - 1), set by the
cusp at the centre, so the last three grid values are extrapolated with
the ratio 2^-beta.
"""

import argparse

from fracmorrey.params import FracParams
from fracmorrey.quadrature import gagliardo_grid, gagliardo_radial
from fracmorrey.trial import TrialFunction


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dim", type=int, default=1)
    ap.add_argument("--s", type=float, default=0.75)
    ap.add_argument("--p", type=float, default=2.0)
    ap.add_argument("--L", type=float, default=1.5)
    ap.add_argument("--sizes", default="")
    args = ap.parse_args()
    prm = FracParams(args.dim, args.s, args.p)
    z = TrialFunction.zeta(prm)
    rad = gagliardo_radial(prm, z.radial_profile()).raisedToP
    default = "33,65,129" if args.dim == 2 else "513,1025,2049,4097,8193"
    sizes = [int(v) for v in (args.sizes or default).split(",")]
    vals = []
    print(f"radial {rad:.10f}")
    for n in sizes:
        v = gagliardo_grid(prm, z.sample(args.L, n)).raisedToP
        vals.append(v)
        print(f"n={n:6d}  grid {v:.10f}  rel {v / rad - 1.0:+.3e}")
    r = 2.0 ** (-prm.beta)
    if len(vals) >= 2:
        x = vals[-1] + (vals[-1] - vals[-2]) * r / (1.0 - r)
        print(f"extrapolated {x:.10f}  rel {x / rad - 1.0:+.3e}")


if __name__ == "__main__":
    main()
