"""Christoffel-function ordering and the off-diagonal comparison bound.

    python3 scripts/sandwich.py [--R 64] [--alpha 1.3,1.1,1.05]
"""

import argparse

import numpy as np

from rigidkernel.pointconf import make_lattice_config
from rigidkernel.universality import (ComparisonKernels, limiting_constants, lubinsky_gap,
                                      sandwich_check)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--R", type=float, default=64)
    ap.add_argument("--alpha", default="1.3,1.1,1.05")
    ap.add_argument("--shift", type=float, default=0.5)
    args = ap.parse_args()
    cfg = make_lattice_config(4 * args.R, args.shift)

    for alpha in (float(a) for a in args.alpha.split(",")):
        ck = ComparisonKernels(cfg, args.R, alpha)
        rep = sandwich_check(cfg, args.R, alpha, kernels=ck)
        p, r, m = rep.normalized()
        cp, cm = limiting_constants(alpha)
        worst = min(rhs - lhs for lhs, rhs in
                    (lubinsky_gap(cfg, args.R, alpha, x, y, kernels=ck)
                     for x in rep.x for y in rep.x))
        print(f"alpha={alpha}: N={rep.N} eps_R={rep.eps_R:.3e} ordering holds {rep.holds}")
        print(f"  (1/N)K at 0:  w+ {p[4]:.4f} (c+ {cp:.4f})  w_R {r[4]:.4f}  "
              f"w- {m[4]:.4f} (c- {cm:.4f})")
        print(f"  min rhs - lhs over {rep.x.size ** 2} pairs: {worst:.4f}")
        print(f"  ordering margins: {np.min(r - p):.3e}, {np.min(m - r):.3e}")


if __name__ == "__main__":
    main()
