"""Independent brute-force values frozen into the test suite.

Both quantities are conditionally or slowly convergent lattice sums. They
are summed directly (math.fsum) up to a cutoff S and 2S, and the 1/S
truncation term is removed by Richardson extrapolation ``2 f(2S) - f(S)``.
No code from the package is used.

    python3 scripts/oracles.py
"""

import math

import numpy as np

S = 10 ** 6


def lattice(shift, R, cutoff):
    """Sites ``k + shift`` with ``R < |k + shift| < cutoff``."""
    k = np.arange(-cutoff - 2, cutoff + 2, dtype=float) + shift
    return k[(np.abs(k) > R) & (np.abs(k) < cutoff)]


def eps_quarter(cutoff, R=20.0, N=40):
    p = lattice(0.25, R, cutoff)
    return 2 * R / N * math.fsum(1.0 / p)


def log_rho_half(cutoff, R=10.0, t=5.0):
    p = lattice(0.5, R, cutoff)
    return 2 * math.fsum(np.log1p(-t / p))


def richardson(f):
    return 2 * f(2 * S) - f(S)


if __name__ == "__main__":
    print(f"EPS_R_QUARTER_R20_N40 = {richardson(eps_quarter)!r}")
    print(f"LOG_RHO_HALF_R10_T5 = {richardson(log_rho_half)!r}")
