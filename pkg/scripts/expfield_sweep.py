"""Kernel error for the exponential-field weights across N, eps and exponent.

    python3 scripts/expfield_sweep.py [--alpha 1.1] [--N 20,40,80,160]
"""

import argparse

from rigidkernel.equilibrium import eps_alpha
from rigidkernel.expfield import expfield_error


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--alpha", type=float, default=1.1)
    ap.add_argument("--N", default="20,40,80,160")
    ap.add_argument("--x0", type=float, default=0.0)
    args = ap.parse_args()
    Ns = [int(n) for n in args.N.split(",")]
    ea = eps_alpha(args.alpha)

    print(f"alpha={args.alpha} eps_alpha={ea:.4f} x0={args.x0}, error at (0.5, -0.5)")
    print(f"{'exponent':>9} {'eps/eps_a':>9}" + "".join(f"{'N=' + str(n):>11}" for n in Ns))
    for jac in (-0.5, 0.5):
        for frac in (-0.5, 0.0, 0.5):
            errs = [expfield_error(args.alpha, frac * ea, N, jac, args.x0) for N in Ns]
            print(f"{jac:>+9.1f} {frac:>9.1f}" + "".join(f"{e:>11.2e}" for e in errs))


if __name__ == "__main__":
    main()
