"""Variational equalities and the xi bound over a small parameter grid.

    python3 scripts/equilibrium_check.py
"""

import numpy as np

from rigidkernel import equilibrium as eq


def main():
    grid = np.linspace(-0.99, 0.99, 199)
    print(f"{'alpha':>6} {'eps/eps_a':>9} {'mass-1':>10} {'max dev':>10} {'ell':>10} {'TV':>9}")
    for alpha in (1.05, 1.1, 1.3, 2.0):
        for frac in (-0.5, 0.0, 0.5, 0.9):
            p = eq.EquilibriumParams(alpha, frac * eq.eps_alpha(alpha))
            rep = eq.verify_variational(p, grid)
            tv = eq.total_variation_to_oracle(p)
            print(f"{alpha:>6} {frac:>9} {rep.normalization - 1:>10.1e} "
                  f"{rep.max_variational_deviation:>10.1e} {rep.ell_estimate:>10.6f} {tv:>9.2e}")

    print("\nmin Re xi on the ellipse against the lower bound")
    for alpha, eps, tau in ((1.3, 0.2, 1.05), (1.3, 0.0, 1.1), (1.5, 0.5, 1.05)):
        p = eq.EquilibriumParams(alpha, eps)
        m, z = eq.min_re_xi_on_ellipse(p, tau)
        print(f"alpha={alpha} eps={eps} tau={tau}: {m:.4f} at {z:.3f}, "
              f"bound {eq.xi_lower_bound(p, tau):.4f}")


if __name__ == "__main__":
    main()
