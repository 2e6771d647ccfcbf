"""Sine-kernel universality experiments for the conditional weights.

The kernel of ``rho_R`` at microscopic scale is read off from the rescaled
weight ``w_R(t) = rho_R(R t)`` on ``[-1, 1]`` through
``K_N(x, y; rho_R) = K_N(x/R, y/R; w_R) / R`` with ``N = N(R)``.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from rigidkernel.equilibrium import c_alpha
from rigidkernel.errors import ParameterError, StabilityError
from rigidkernel.orthopoly import (cd_kernel, default_quad_order, kernel_matrix,
                                   stieltjes_recurrence)
from rigidkernel.pointconf import PointConfiguration, count_points, epsilon_R
from rigidkernel.weights import WR, ComparisonMinus, ComparisonPlus

SERIES_SWITCH = 1e-6


def sine_kernel(x, y):
    """``sin(pi (x-y)) / (pi (x-y))``; a two-term series near the diagonal."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    d = x - y
    u = np.pi * d
    with np.errstate(divide="ignore", invalid="ignore"):
        far = np.sin(u) / u
    near = 1.0 - u * u / 6.0
    out = np.where(np.abs(d) < SERIES_SWITCH, near, far)
    return float(out) if out.ndim == 0 else out


def scaled_sine_kernel(c, x, y):
    """``sin(pi c (x-y)) / (pi (x-y))``, the limit with density ``c``."""
    return c * sine_kernel(c * np.asarray(x, dtype=float), c * np.asarray(y, dtype=float))


def _degree(config, R, thm13):
    return math.floor(2 * R) if thm13 else count_points(config, R)


def w_R_coefficients(config: PointConfiguration, R: float, N: int,
                     quad_order: int | None = None, check_stability: bool = False):
    order = quad_order or default_quad_order(N)
    try:
        return stieltjes_recurrence(WR(config, R), N, order, check_stability)
    except StabilityError as exc:
        raise StabilityError(f"{exc} (R={R}, N={N}, quad_order={order})") from exc


def rescaled_kernel(config: PointConfiguration, R: float, x, y,
                    quad_order: int | None = None, thm13: bool = False, coeffs=None):
    """Microscopic kernel of the conditional ensemble at the origin.

    The default returns ``K_N(x/R, y/R; w_R) / R`` with ``N = N(R)``. With
    ``thm13`` the degree is ``floor(2R)`` and the scaling is by ``N/2``,
    i.e. ``(2/N) K_N(2x/N, 2y/N; w_R)``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    scale = _degree(config, R, True) / 2.0 if thm13 else float(R)
    if np.any(np.abs(x) >= scale) or np.any(np.abs(y) >= scale):
        raise ParameterError("rescaled arguments must lie inside the support")
    N = _degree(config, R, thm13)
    if coeffs is None:
        coeffs = w_R_coefficients(config, R, N, quad_order)
    return cd_kernel(coeffs, N, x / scale, y / scale, with_weight=True) / scale


@dataclass
class ConvergenceRow:
    R: float
    N: int
    eps_R: float
    sup_error: float
    diag_error: float
    quad_order: int
    wall_ms: float
    stable: bool | None = None
    error: str | None = None


@dataclass
class ConvergenceTable:
    rows: list[ConvergenceRow]
    grid_spec: tuple[float, int]
    config_id: str = ""
    grids: dict = field(default_factory=dict, repr=False)

    def sup_errors(self) -> list[float]:
        return [r.sup_error for r in self.rows]

    def strictly_decreasing(self) -> bool:
        errs = self.sup_errors()
        if any(not np.isfinite(e) for e in errs):
            return False
        return all(b < a for a, b in zip(errs, errs[1:]))


def _grid(A, grid_n):
    if A == 0:
        return np.zeros(1)
    return np.linspace(-A, A, grid_n)


def _row(config, R, A, grid_n, quad_rule, thm13, check_stability):
    t0 = time.perf_counter()
    N = _degree(config, R, thm13)
    order = quad_rule(N)
    eps = epsilon_R(config, R, N) if config.has_tail else float("nan")
    xs = _grid(A, grid_n)
    try:
        coeffs = w_R_coefficients(config, R, N, order, check_stability)
    except StabilityError as exc:
        wall = 1e3 * (time.perf_counter() - t0)
        return ConvergenceRow(R, N, eps, math.nan, math.nan, order, wall, False, str(exc)), None
    scale = N / 2.0 if thm13 else float(R)
    K = kernel_matrix(coeffs, N, xs / scale, with_weight=True) / scale
    ref = sine_kernel(xs[:, None], xs[None, :])
    err = np.abs(K - ref)
    wall = 1e3 * (time.perf_counter() - t0)
    row = ConvergenceRow(R, N, eps, float(err.max()), float(np.max(np.abs(np.diag(K) - 1.0))),
                         order, wall, coeffs.stable)
    return row, (xs, K, ref)


def run_universality(config: PointConfiguration, R_list, A: float = 2.0, grid_n: int = 41,
                     quad_rule=default_quad_order, thm13: bool = False,
                     check_stability: bool = True, threads: int = 1,
                     config_id: str = "") -> ConvergenceTable:
    """Sweep ``R`` and compare the microscopic kernel with the sine kernel.

    Each row evaluates the kernel on a ``grid_n x grid_n`` grid over
    ``[-A, A]^2``; ``A = 0`` collapses the grid to the single point 0, so
    only the diagonal error is meaningful. A row whose recurrence fails is
    kept with NaN errors and the message in ``error``; the stability flag
    from doubling the quadrature order is stored but does not abort.
    """
    R_list = sorted(float(R) for R in R_list)
    if A < 0 or grid_n < 1:
        raise ParameterError("need A >= 0 and grid_n >= 1")

    def job(R):
        return _row(config, R, A, grid_n, quad_rule, thm13, check_stability)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(job, R_list))
    else:
        results = [job(R) for R in R_list]
    rows = [r for r, _ in results]
    grids = {r.R: g for r, g in results if g is not None}
    return ConvergenceTable(rows, (float(A), int(grid_n)), config_id, grids)


# --------------------------------------------------------------------------
# comparison weights


@dataclass
class SandwichReport:
    R: float
    N: int
    alpha: float
    eps_R: float
    x: np.ndarray
    k_plus: np.ndarray
    k_R: np.ndarray
    k_minus: np.ndarray

    @property
    def lower_ok(self) -> np.ndarray:
        return self.k_plus <= self.k_R

    @property
    def upper_ok(self) -> np.ndarray:
        return self.k_R <= self.k_minus

    @property
    def holds(self) -> bool:
        return bool(np.all(self.lower_ok) and np.all(self.upper_ok))

    def normalized(self):
        """``(1/N) K^_N`` for the three weights, the quantities tending to ``c+, 1/2, c-``."""
        return self.k_plus / self.N, self.k_R / self.N, self.k_minus / self.N


class ComparisonKernels:
    """Recurrences for ``w_R`` and the two comparison weights at one ``R``."""

    def __init__(self, config, R, alpha, quad_order=None, eps=None):
        self.config, self.R, self.alpha = config, float(R), float(alpha)
        self.N = N = count_points(config, R)
        self.eps = epsilon_R(config, R, N) if eps is None else float(eps)
        order = quad_order or default_quad_order(N)
        self.w_R = w_R_coefficients(config, R, N, order)
        self.plus = stieltjes_recurrence(ComparisonPlus(alpha, self.eps, N), N, order)
        self.minus = stieltjes_recurrence(ComparisonMinus(alpha, self.eps, N), N, order)

    def khat(self, which, x, y):
        c = {"+": self.plus, "R": self.w_R, "-": self.minus}[which]
        return cd_kernel(c, self.N, x, y)


def sandwich_check(config: PointConfiguration, R: float, alpha: float, x_grid=None,
                   kernels: ComparisonKernels | None = None) -> SandwichReport:
    """Christoffel-function ordering ``K^(w+) <= K^(w_R) <= K^(w-)`` on the diagonal.

    ``x_grid`` is in the variable of ``w_R`` (so of order ``1/N``); the default
    is the nine points ``k/N``, ``k = -4..4``.
    """
    ck = kernels or ComparisonKernels(config, R, alpha)
    if x_grid is None:
        x_grid = np.arange(-4, 5) / ck.N
    x = np.asarray(x_grid, dtype=float)
    beta = alpha ** -2
    if np.any(np.abs(x) >= beta):
        raise ParameterError("test points must lie inside the support of w^-")
    return SandwichReport(ck.R, ck.N, ck.alpha, ck.eps, x,
                          np.atleast_1d(ck.khat("+", x, x)),
                          np.atleast_1d(ck.khat("R", x, x)),
                          np.atleast_1d(ck.khat("-", x, x)))


def lubinsky_gap(config: PointConfiguration, R: float, alpha: float, x: float, y: float,
                 kernels: ComparisonKernels | None = None, compare: str = "+"):
    """Both sides of the off-diagonal comparison inequality.

    ``lhs = |K^(x,y;w+) - K^(x,y;w_R)| / K^(x,x;w_R)`` and
    ``rhs = sqrt(K^(y,y;w_R) / K^(x,x;w_R)) * sqrt(1 - K^(x,x;w+) / K^(x,x;w_R))``.
    ``compare='R'`` swaps ``w+`` for ``w_R`` itself (``lhs`` is then 0).
    A radicand below ``-1e-12`` means the diagonal ordering already failed.
    """
    ck = kernels or ComparisonKernels(config, R, alpha)
    kxx = ck.khat("R", x, x)
    kyy = ck.khat("R", y, y)
    kc_xy = ck.khat(compare, x, y)
    kc_xx = ck.khat(compare, x, x)
    lhs = abs(kc_xy - ck.khat("R", x, y)) / kxx
    radicand = 1.0 - kc_xx / kxx
    if radicand < -1e-12:
        raise StabilityError(f"sandwich violated at x={x}: 1 - ratio = {radicand:.3e}")
    rhs = math.sqrt(kyy / kxx) * math.sqrt(max(radicand, 0.0))
    return lhs, rhs


def limiting_constants(alpha: float) -> tuple[float, float]:
    return c_alpha("+", alpha), c_alpha("-", alpha)
