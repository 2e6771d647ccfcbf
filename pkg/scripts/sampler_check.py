"""Cardinality and pair correlation of the finite-window sine sampler.

    python3 scripts/sampler_check.py [--L 5] [--samples 10000]
"""

import argparse

import numpy as np
from scipy.integrate import quad

from rigidkernel.sampler import pair_correlation, sample_many


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--L", type=float, default=5.0)
    ap.add_argument("--samples", type=int, default=10_000)
    args = ap.parse_args()
    L = args.L
    samples = sample_many(L, range(args.samples))
    n = np.array([s.points.size for s in samples])
    print(f"L={L}: mean count {n.mean():.4f} +- {n.std() / np.sqrt(n.size):.4f}, "
          f"expected {samples[0].eigenvalue_spectrum.sum():.4f}, variance {n.var():.4f}")

    bins = np.arange(0, 3.01, 0.25)
    centers, g = pair_correlation(samples, L, bins)
    print(f"{'r':>6} {'empirical':>10} {'1-sinc^2':>10}")
    for c, v, a, b in zip(centers, g, bins[:-1], bins[1:]):
        exact = (quad(lambda r: (1 - np.sinc(r) ** 2) * (2 * L - r), a, b)[0]
                 / quad(lambda r: 2 * L - r, a, b)[0])
        print(f"{c:>6.3f} {v:>10.4f} {exact:>10.4f}")


if __name__ == "__main__":
    main()
