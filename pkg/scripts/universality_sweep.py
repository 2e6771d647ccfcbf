"""Sine-kernel convergence for lattice, jittered and sampled configurations.

    python3 scripts/universality_sweep.py [--R 8,16,32,64] [--grid 41]
"""

import argparse

from rigidkernel.pointconf import make_jittered_config, make_lattice_config
from rigidkernel.sampler import sample_many, to_configuration
from rigidkernel.universality import run_universality


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--R", default="8,16,32,64")
    ap.add_argument("--grid", type=int, default=41)
    ap.add_argument("--seeds", type=int, default=3)
    args = ap.parse_args()
    Rs = [float(r) for r in args.R.split(",")]
    top = max(Rs)

    configs = {"half lattice": make_lattice_config(4 * top, 0.5),
               "quarter lattice": make_lattice_config(4 * top, 0.25)}
    for s in range(args.seeds):
        configs[f"jitter seed {s}"] = make_jittered_config(4 * top, 0.3, 0.4, s)
    for s in sample_many(3 * top, range(args.seeds)):
        configs[f"sine sample seed {s.seed}"] = to_configuration(s)

    print(f"{'config':<22}" + "".join(f"R={R:<9g}" for R in Rs) + "decreasing")
    for name, cfg in configs.items():
        tab = run_universality(cfg, Rs, grid_n=args.grid)
        print(f"{name:<22}" + "".join(f"{e:<11.2e}" for e in tab.sup_errors())
              + str(tab.strictly_decreasing()))

    print("\ndegree floor(2R) against N(R), half lattice at non-integer R")
    Rs = [R + 0.7 for R in Rs]
    a = run_universality(configs["half lattice"], Rs, grid_n=args.grid).sup_errors()
    b = run_universality(configs["half lattice"], Rs, grid_n=args.grid, thm13=True).sup_errors()
    for R, x, y in zip(Rs, a, b):
        print(f"R={R:<6g} N(R): {x:.3e}  floor(2R): {y:.3e}  gap {abs(x - y):.3e}")


if __name__ == "__main__":
    main()
