"""Command line entry point: ``rkl <subcommand> ...``.

Every run writes its CSV/JSON outputs and a ``manifest.json`` into the
output directory (``--out``, overridden by ``RKL_OUT``). Exit status is 0 on
success, 2 on parameter errors, 3 when a numerical stability check aborts.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import platform
import sys
import time
from pathlib import Path

import numpy as np
import scipy

from rigidkernel import __version__
from rigidkernel.errors import ParameterError, StabilityError

EXIT_OK, EXIT_FAIL, EXIT_PARAM, EXIT_STABILITY = 0, 1, 2, 3


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return str(int(v))
    return str(v)


def write_csv(path: Path, header, rows) -> Path:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if np.isfinite(v) else str(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    return v


def write_json(path: Path, data) -> Path:
    path.write_text(json.dumps(_jsonable(data), indent=2) + "\n")
    return path


def parse_grid(spec: str) -> np.ndarray:
    try:
        a, b, n = spec.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise ParameterError(f"grid must look like a:b:n, got {spec!r}") from None
    if n < 1:
        raise ParameterError("grid needs n >= 1")
    return np.linspace(a, b, n) if n > 1 else np.array([a])


def parse_list(spec: str, kind=float):
    try:
        return [kind(s) for s in spec.split(",") if s]
    except ValueError:
        raise ParameterError(f"cannot parse list {spec!r}") from None


# --------------------------------------------------------------------------
# subcommands


def cmd_gen(args, out: Path):
    from rigidkernel.pointconf import make_jittered_config, make_lattice_config, write_config
    from rigidkernel.sampler import sample_sine_dpp, to_configuration

    if args.lattice:
        cfg = make_lattice_config(args.S, args.shift)
    elif args.jitter:
        cfg = make_jittered_config(args.S, args.amp, args.exp, args.seed)
    else:
        if args.L is None:
            raise ParameterError("--dpp needs -L")
        cfg = to_configuration(sample_sine_dpp(args.L, args.order, args.seed))
    path = Path(args.o) if args.o else out / "config.txt"
    write_config(cfg, path)
    return EXIT_OK, {"config": str(path), "n_points": int(cfg.points.size),
                     "window_radius": cfg.window_radius}, []


def cmd_check(args, out: Path):
    from rigidkernel.pointconf import check_assumptions, read_config

    cfg = read_config(args.config)
    S = cfg.window_radius
    grid = parse_list(args.S_grid) if args.S_grid else [S / 8, S / 4, S / 2, S]
    rep = check_assumptions(cfg, grid)
    summary = {"passed": rep.passed, "monotone": rep.monotone,
               "pv_converged": rep.pv_converged, "pv_estimate": rep.pv_estimate,
               "ratio_ok": rep.ratio_ok, "max_ratio_deviation": rep.max_ratio_deviation,
               "notes": rep.notes}
    write_csv(out / "pv_partial_sums.csv", ["S", "partial_sum"], rep.pv_partial_sums)
    write_csv(out / "ratios.csv", ["n", "p_n_over_n"], rep.ratio_samples)
    write_json(out / "check.json", summary)
    print(json.dumps(_jsonable(summary)))
    return (EXIT_OK if rep.passed else EXIT_FAIL), summary, ["pv_partial_sums.csv", "ratios.csv"]


def _weight_from_args(args, N=None):
    from rigidkernel.pointconf import count_points, read_config
    from rigidkernel.weights import WR, ComparisonMinus, ComparisonPlus, ExpField, Legendre, RhoR

    name = args.weight
    N = N if N is not None else args.N
    if name in ("rho_R", "w_R"):
        if args.config is None or args.R is None:
            raise ParameterError(f"{name} needs --config and --R")
        cfg = read_config(args.config)
        return (RhoR if name == "rho_R" else WR)(cfg, args.R), \
            (N if N is not None else count_points(cfg, args.R))
    if N is None:
        raise ParameterError(f"{name} needs -N")
    if name == "comp+":
        return ComparisonPlus(args.alpha, args.eps, N), N
    if name == "comp-":
        return ComparisonMinus(args.alpha, args.eps, N), N
    if name == "expfield":
        return ExpField(args.alpha, args.eps, N, args.jacobi), N
    if name == "legendre":
        return Legendre(), N
    raise ParameterError(f"unknown weight {name!r}")


def cmd_weight(args, out: Path):
    w, _ = _weight_from_args(args)
    t = parse_grid(args.grid)
    logw = w.log_weight(t)
    rows = zip(t, logw, np.exp(logw))
    write_csv(out / "weight.csv", ["t", "log_w", "w"], rows)
    return EXIT_OK, {"weight": args.weight, "n": int(t.size)}, ["weight.csv"]


def cmd_opoly(args, out: Path):
    from rigidkernel.orthopoly import stieltjes_recurrence

    w, N = _weight_from_args(args)
    c = stieltjes_recurrence(w, N, args.order, check_stability=args.check)
    # row k holds a_k and b_{k+1}, the coefficient linking phi_k and phi_{k+1}
    rows = [(k, c.a[k], c.b[k]) for k in range(N)]
    write_csv(out / "recurrence.csv", ["k", "a_k", "b_k_plus_1"], rows)
    summary = {"N": N, "quad_order": c.quad_order, "norm0": c.norm0,
               "stable": c.stable, "stability_error": c.stability_error}
    if args.check and not c.stable:
        write_json(out / "opoly.json", summary)
        raise StabilityError(f"recurrence unstable: error {c.stability_error:.3e}")
    write_json(out / "opoly.json", summary)
    return EXIT_OK, summary, ["recurrence.csv", "opoly.json"]


def cmd_kernel(args, out: Path):
    from rigidkernel.orthopoly import kernel_matrix, stieltjes_recurrence

    w, N = _weight_from_args(args)
    c = stieltjes_recurrence(w, N, args.order)
    xs = parse_grid(args.grid)
    K = kernel_matrix(c, N, xs, with_weight=not args.hat)
    rows = ((xs[i], xs[j], K[i, j]) for i in range(xs.size) for j in range(xs.size))
    write_csv(out / "kernel.csv", ["x", "y", "K"], rows)
    return EXIT_OK, {"N": N, "hat": args.hat, "grid": args.grid}, ["kernel.csv"]


def cmd_equilibrium(args, out: Path):
    from rigidkernel import equilibrium as eq

    params = eq.EquilibriumParams(args.alpha, args.eps)
    grid = parse_grid(args.grid)
    summary = {"alpha": params.alpha, "eps": params.eps, "eps_alpha": params.eps_alpha,
               "psi_at_zero": eq.psi_at_zero(params.alpha),
               "normalization": None, "ell": None, "max_dev": None, "min_re_xi": None}
    psi = eq.psi_alpha_eps(params, grid)
    if args.verify:
        rep = eq.verify_variational(params, grid)
        summary.update(normalization=rep.normalization, ell=rep.ell_estimate,
                       max_dev=rep.max_variational_deviation)
        vals = rep.two_U_plus_V
    else:
        summary["normalization"] = eq.total_mass(
            lambda t: eq.rho_alpha_eps(params, t) / (2 * np.pi), weighted=True)
        vals = np.full(grid.shape, np.nan)
    if args.xi:
        m, z = eq.min_re_xi_on_ellipse(params, args.tau)
        M = eq.rho_derivative_bound(params, args.tau)
        summary.update(min_re_xi=m, argmin_re_xi=[z.real, z.imag], M=M,
                       xi_lower_bound=eq.xi_lower_bound(params, args.tau, M))
    write_csv(out / "equilibrium.csv", ["x", "psi", "2U_plus_V"], zip(grid, psi, vals))
    write_json(out / "equilibrium.json", summary)
    print(json.dumps(_jsonable(summary)))
    return EXIT_OK, summary, ["equilibrium.csv", "equilibrium.json"]


def cmd_universality(args, out: Path):
    from rigidkernel.pointconf import read_config
    from rigidkernel.universality import run_universality

    cfg = read_config(args.config)
    R_list = parse_list(args.R)
    table = run_universality(cfg, R_list, args.A, args.grid, thm13=args.thm13,
                             threads=args.threads, config_id=str(args.config))
    cols = ["R", "N", "eps_R", "sup_error", "diag_error", "quad_order", "wall_ms"]
    write_csv(out / "table.csv", cols, ([getattr(r, c) for c in cols] for r in table.rows))
    files = ["table.csv"]
    for row in table.rows:
        if row.R not in table.grids:
            continue
        xs, K, ref = table.grids[row.R]
        name = f"kernel_R{row.R:g}.csv"
        rows = ((xs[i], xs[j], K[i, j], ref[i, j], abs(K[i, j] - ref[i, j]))
                for i in range(xs.size) for j in range(xs.size))
        write_csv(out / name, ["x", "y", "K", "sine", "abs_err"], rows)
        files.append(name)
    ok = table.strictly_decreasing()
    summary = {"decreasing": ok, "sup_errors": table.sup_errors(),
               "errors": [r.error for r in table.rows if r.error]}
    print(json.dumps(_jsonable(summary)))
    return (EXIT_OK if ok else EXIT_FAIL), summary, files


def cmd_prop4(args, out: Path):
    from rigidkernel.expfield import expfield_coefficients, expfield_kernel
    from rigidkernel.universality import sine_kernel

    jac = {"+": 0.5, "-": -0.5}[args.exp]
    pts = parse_grid(args.grid)
    rows = []
    for N in parse_list(args.N, int):
        c = expfield_coefficients(args.alpha, args.eps, N, jac)
        for x in pts:
            for y in pts:
                K = expfield_kernel(args.alpha, args.eps, N, jac, args.x0, x, y, coeffs=c)
                s = sine_kernel(x, y)
                rows.append((N, x, y, K, s, abs(K - s)))
    write_csv(out / "prop4.csv", ["N", "x", "y", "K", "sine", "abs_err"], rows)
    by_N = {}
    for N, *_, err in rows:
        by_N[N] = max(by_N.get(N, 0.0), err)
    summary = {"sup_error_by_N": {str(k): v for k, v in by_N.items()}}
    print(json.dumps(_jsonable(summary)))
    return EXIT_OK, summary, ["prop4.csv"]


def _gnuplot(out: Path, command: str, files):
    lines = ["set datafile separator ','", "set key autotitle columnhead"]
    if command == "universality":
        lines += ["set logscale xy", "set xlabel 'R'", "set ylabel 'sup error'",
                  "plot 'table.csv' using 1:4 with linespoints"]
    elif command == "equilibrium":
        lines += ["plot 'equilibrium.csv' using 1:2 with lines"]
    elif command == "weight":
        lines += ["plot 'weight.csv' using 1:3 with lines"]
    elif command == "opoly":
        lines += ["plot 'recurrence.csv' using 1:3 with points"]
    elif command in ("kernel", "prop4"):
        f = files[0]
        col = 4 if command == "kernel" else 5
        x = 2 if command == "prop4" else 1
        lines += ["set pm3d map", f"splot '{f}' using {x}:{x + 1}:{col}"]
    else:
        return None
    lines.append("pause -1")
    path = out / "plot.gp"
    path.write_text("\n".join(lines) + "\n")
    return path


# --------------------------------------------------------------------------
# parser


def _add_weight_opts(p):
    p.add_argument("--weight", "--spec", dest="weight", required=True,
                   choices=["rho_R", "w_R", "comp+", "comp-", "expfield", "legendre"])
    p.add_argument("--alpha", type=float, default=1.1)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("-N", "--N", type=int, default=None)
    p.add_argument("--R", type=float, default=None)
    p.add_argument("--jacobi", type=float, default=-0.5, choices=[-0.5, 0.5])
    p.add_argument("--config", default=None)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="./out", help="output directory (RKL_OUT overrides)")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--gnuplot", action="store_true", help="also write plot.gp")

    parser = argparse.ArgumentParser(prog="rkl", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate a point configuration")
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--lattice", action="store_true")
    kind.add_argument("--jitter", action="store_true")
    kind.add_argument("--dpp", action="store_true")
    p.add_argument("-S", type=float, default=100.0)
    p.add_argument("--shift", type=float, default=0.5)
    p.add_argument("--amp", type=float, default=0.2)
    p.add_argument("--exp", type=float, default=0.4)
    p.add_argument("-L", type=float, default=None)
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", default=None, help="output path for the configuration file")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", parents=[common], help="diagnose the growth assumptions")
    p.add_argument("config")
    p.add_argument("--S-grid", dest="S_grid", default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("weight", parents=[common], help="tabulate a weight")
    _add_weight_opts(p)
    p.add_argument("--grid", default="-1:1:201")
    p.set_defaults(func=cmd_weight)

    p = sub.add_parser("opoly", parents=[common], help="recurrence coefficients")
    _add_weight_opts(p)
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--check", action="store_true", help="recompute at twice the order")
    p.set_defaults(func=cmd_opoly)

    p = sub.add_parser("kernel", parents=[common], help="Christoffel-Darboux kernel on a grid")
    _add_weight_opts(p)
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--grid", default="-0.5:0.5:21")
    p.add_argument("--hat", action="store_true", help="omit the weight factors")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("equilibrium", parents=[common], help="equilibrium density checks")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--xi", action="store_true")
    p.add_argument("--tau", type=float, default=1.05)
    p.add_argument("--grid", default="-0.99:0.99:101")
    p.set_defaults(func=cmd_equilibrium)

    p = sub.add_parser("universality", parents=[common], help="sine-kernel convergence sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--R", default="8,16,32,64")
    p.add_argument("-A", type=float, default=2.0)
    p.add_argument("--grid", type=int, default=41)
    p.add_argument("--thm13", action="store_true", help="use N = floor(2R)")
    p.set_defaults(func=cmd_universality)

    p = sub.add_parser("prop4", parents=[common], help="universality for exponential fields")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--exp", choices=["+", "-"], default="-")
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("-N", "--N", default="20,40,80")
    p.add_argument("--grid", default="-1:1:5")
    p.set_defaults(func=cmd_prop4)
    return parser


_VALUE_OPTS = ("--grid", "--S-grid", "--shift", "--eps", "--x0", "--R")


def _glue_negative_values(argv):
    """Turn ``--grid -1:1:5`` into ``--grid=-1:1:5`` so argparse keeps the value."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_OPTS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and len(argv[i + 1]) > 1 and (argv[i + 1][1].isdigit() or argv[i + 1][1] == "."):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(_glue_negative_values(argv))
    out = Path(os.environ.get("RKL_OUT") or args.out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    manifest = {
        "command": args.command,
        "argv": argv,
        "flags": {k: v for k, v in sorted(vars(args).items()) if k != "func"},
        "versions": {"rigidkernel": __version__, "python": platform.python_version(),
                     "numpy": np.__version__, "scipy": scipy.__version__},
        "status": None,
        "exit_code": None,
        "outputs": [],
        "summary": None,
        "wall_time_s": None,
    }
    try:
        code, summary, files = args.func(args, out)
        manifest.update(status="ok" if code == EXIT_OK else "check_failed",
                        summary=summary, outputs=files)
        if args.gnuplot:
            gp = _gnuplot(out, args.command, files)
            if gp is not None:
                manifest["outputs"].append(gp.name)
    except ParameterError as exc:
        print(f"rkl: parameter error: {exc}", file=sys.stderr)
        code = EXIT_PARAM
        manifest.update(status="parameter_error", summary={"message": str(exc)})
    except StabilityError as exc:
        print(f"rkl: stability abort: {exc}", file=sys.stderr)
        code = EXIT_STABILITY
        manifest.update(status="stability_error", summary={"message": str(exc)})
    manifest["exit_code"] = code
    manifest["wall_time_s"] = time.perf_counter() - t0
    write_json(out / "manifest.json", manifest)
    return code


if __name__ == "__main__":
    sys.exit(main())
