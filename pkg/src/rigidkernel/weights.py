"""Weight functions on intervals, evaluated in the log domain.

Every weight is represented as ``jacobi_factor(t) * exp(log_smooth(t))`` on a
support ``[lo, hi]``. The Jacobi factor is ``(1 - s^2)^jacobi`` in the
variable ``s`` mapped to ``[-1, 1]``, with ``jacobi`` in ``{0, -1/2, 1/2}``;
the quadrature layer uses it to pick a Gauss rule that absorbs the endpoint
behaviour exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from rigidkernel.accurate import rowsum
from rigidkernel.errors import ParameterError
from rigidkernel.pointconf import PointConfiguration, epsilon_R, count_points

_LOG2 = np.log(2.0)
_SERIES_CUTOFF = 0.1
_SERIES_TERMS = 14


def eval_V(t):
    """``V(t) = (1+t) log(1+t) + (1-t) log(1-t)`` on ``[-1, 1]``.

    Small arguments use the Maclaurin series
    ``t^2 + sum_{k>=2} t^{2k} / (k (2k-1))`` to avoid cancellation.
    """
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1):
        raise ParameterError("V is defined on [-1, 1] only")
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    out = np.empty_like(t)
    small = np.abs(t) < _SERIES_CUTOFF
    ts = t[small] ** 2
    acc = np.zeros_like(ts)
    for k in range(_SERIES_TERMS, 1, -1):
        acc = (acc + 1.0 / (k * (2 * k - 1))) * ts
    out[small] = ts + ts * acc
    tb = t[~small]
    with np.errstate(divide="ignore", invalid="ignore"):
        plus = np.where(tb == -1, 0.0, (1 + tb) * np.log1p(tb))
        minus = np.where(tb == 1, 0.0, (1 - tb) * np.log1p(-tb))
    out[~small] = plus + minus
    return float(out[0]) if scalar else out


def V_series(t, terms: int = 200) -> float:
    """Partial sum of the Maclaurin series of ``V``; an independent check."""
    t2 = float(t) ** 2
    total = t2
    power = t2
    for k in range(2, terms + 1):
        power *= t2
        total += power / (k * (2 * k - 1))
    return total


def log_rho_R(config: PointConfiguration, R: float, t):
    """``log rho_R(t) = 2 sum_{|p_n| > R} log(1 - t/p_n)`` for ``|t| <= R``.

    Window factors are summed exactly per ``t``; the lattice tail uses
    ``prod_{k>=0} (1 - t/(a+k)) (1 + t/(b+k)) = G(a) G(b) / (G(a-t) G(b+t))``,
    the shifted form of Euler's sine product.
    """
    if not config.has_tail:
        raise ParameterError("rho_R needs a tail model; configuration has none")
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    if np.any(np.abs(t) > R):
        raise ParameterError("rho_R is evaluated on [-R, R] only")
    pos, neg, a, b = config.exterior(R)
    terms = np.concatenate([np.log1p(-t[:, None] / pos[None, :]),
                            np.log1p(t[:, None] / neg[None, :])], axis=1)
    window = rowsum(terms) if terms.shape[1] else np.zeros(t.size)
    if a == b:
        tail = (gammaln(a) - gammaln(a - t)) + (gammaln(b) - gammaln(b + t))
    else:
        tail = gammaln(a) + gammaln(b) - gammaln(a - t) - gammaln(b + t)
    out = 2.0 * (window + tail)
    out[t == 0] = 0.0
    return float(out[0]) if scalar else out


def eval_w_R(config: PointConfiguration, R: float, t):
    """``w_R(t) = rho_R(R t)`` on ``[-1, 1]``."""
    t = np.asarray(t, dtype=float)
    return np.exp(log_rho_R(config, R, R * t))


# --------------------------------------------------------------------------
# weight specifications


@dataclass(frozen=True, eq=False)
class WeightSpec:
    """Base class; subclasses provide ``support``, ``jacobi`` and ``log_smooth``."""

    @property
    def support(self) -> tuple[float, float]:
        return (-1.0, 1.0)

    jacobi = 0.0

    def log_smooth(self, t):
        raise NotImplementedError

    def is_even(self) -> bool:
        return False

    def _s(self, t):
        lo, hi = self.support
        return (2 * np.asarray(t, dtype=float) - (lo + hi)) / (hi - lo)

    def log_weight(self, t):
        """Full log-weight; ``-inf`` outside the support, ``+inf`` at singular ends."""
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        lo, hi = self.support
        out = np.full(t.shape, -np.inf)
        inside = (t >= lo) & (t <= hi)
        s = self._s(t[inside])
        with np.errstate(divide="ignore"):
            jac = self.jacobi * np.log1p(-s * s) if self.jacobi else 0.0
        out[inside] = self.log_smooth(t[inside]) + jac
        return float(out[0]) if scalar else out

    def __call__(self, t):
        return np.exp(self.log_weight(t))


@dataclass(frozen=True, eq=False)
class Legendre(WeightSpec):
    """``w = 1`` on ``[lo, hi]``."""

    lo: float = -1.0
    hi: float = 1.0

    @property
    def support(self):
        return (float(self.lo), float(self.hi))

    def log_smooth(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))

    def is_even(self):
        return self.lo == -self.hi


@dataclass(frozen=True, eq=False)
class RhoR(WeightSpec):
    config: PointConfiguration
    R: float

    @property
    def support(self):
        return (-float(self.R), float(self.R))

    def log_smooth(self, t):
        return log_rho_R(self.config, self.R, t)

    def is_even(self):
        return self.config.is_symmetric()


@dataclass(frozen=True, eq=False)
class WR(WeightSpec):
    config: PointConfiguration
    R: float

    def log_smooth(self, t):
        return log_rho_R(self.config, self.R, self.R * np.asarray(t, dtype=float))

    def is_even(self):
        return self.config.is_symmetric()


def _check_alpha(alpha):
    if not alpha > 1:
        raise ParameterError("alpha must exceed 1")


@dataclass(frozen=True, eq=False)
class ComparisonPlus(WeightSpec):
    """``(1-t^2)^{-1/2} exp(-N (V(t/alpha) + eps t))`` on ``[-1, 1]``."""

    alpha: float
    eps: float
    N: int
    jacobi = -0.5

    def __post_init__(self):
        _check_alpha(self.alpha)

    def log_smooth(self, t):
        t = np.asarray(t, dtype=float)
        return -self.N * (eval_V(t / self.alpha) + self.eps * t)

    def is_even(self):
        return self.eps == 0


@dataclass(frozen=True, eq=False)
class ComparisonMinus(WeightSpec):
    """``(1-t^2/beta^2)^{1/2} exp(-N (V(alpha t) + eps t))`` on ``[-beta, beta]``, ``beta = alpha^-2``."""

    alpha: float
    eps: float
    N: int
    jacobi = 0.5

    def __post_init__(self):
        _check_alpha(self.alpha)

    @property
    def beta(self) -> float:
        return self.alpha ** -2

    @property
    def support(self):
        return (-self.beta, self.beta)

    def log_smooth(self, t):
        t = np.asarray(t, dtype=float)
        return -self.N * (eval_V(self.alpha * t) + self.eps * t)

    def is_even(self):
        return self.eps == 0


@dataclass(frozen=True, eq=False)
class ExpField(WeightSpec):
    """``(1-t^2)^{jacobi} exp(-N V_{alpha,eps}(t))`` on ``[-1, 1]``, ``jacobi = +-1/2``."""

    alpha: float
    eps: float
    N: int
    jacobi_exponent: float = -0.5

    def __post_init__(self):
        if self.alpha < 1:
            raise ParameterError("alpha must be >= 1")
        if self.jacobi_exponent not in (-0.5, 0.5):
            raise ParameterError("jacobi_exponent must be -1/2 or +1/2")

    @property
    def jacobi(self):
        return self.jacobi_exponent

    def log_smooth(self, t):
        t = np.asarray(t, dtype=float)
        return -self.N * (eval_V(t / self.alpha) + self.eps * t)

    def is_even(self):
        return self.eps == 0


@dataclass(frozen=True, eq=False)
class Scaled(WeightSpec):
    """A weight multiplied by the constant ``exp(log_factor)``."""

    base: WeightSpec
    log_factor: float

    @property
    def support(self):
        return self.base.support

    @property
    def jacobi(self):
        return self.base.jacobi

    def log_smooth(self, t):
        return self.base.log_smooth(t) + self.log_factor

    def is_even(self):
        return self.base.is_even()


def eval_comparison(sign: str, alpha: float, eps: float, N: int, t):
    """Comparison weight ``w^+`` (``sign='+'``) or ``w^-`` (``sign='-'``).

    ``w^-`` vanishes outside ``[-alpha^-2, alpha^-2]``; ``w^+`` is ``+inf`` at
    ``t = +-1``.
    """
    if sign in ("+", "plus"):
        spec = ComparisonPlus(alpha, eps, N)
    elif sign in ("-", "minus"):
        spec = ComparisonMinus(alpha, eps, N)
    else:
        raise ParameterError(f"sign must be '+' or '-', got {sign!r}")
    t = np.asarray(t, dtype=float)
    if sign in ("+", "plus") and np.any(np.abs(t) > 1):
        raise ParameterError("w^+ is supported on [-1, 1]")
    return spec(t)


# --------------------------------------------------------------------------
# inequality checks


def log_tail_product(m: int, x):
    """``log prod_{n>=m} (1 - x^2/n^2) = 2 log G(m) - log G(m-x) - log G(m+x)``; ``-inf`` at ``|x| = m``."""
    x = np.abs(np.asarray(x, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = 2 * gammaln(m) - gammaln(m - x) - gammaln(m + x)
    out = np.where(x >= m, -np.inf, out)
    return np.where(x == 0, 0.0, out)


@dataclass
class MarginReport:
    """Pointwise log-margins of a two-sided inequality (>= 0 means it holds)."""

    t_lower: np.ndarray
    lower_margin: np.ndarray
    t_upper: np.ndarray
    upper_margin: np.ndarray
    tol: float
    extra: dict = field(default_factory=dict)

    @property
    def min_lower(self) -> float:
        return float(np.min(self.lower_margin, initial=np.inf))

    @property
    def min_upper(self) -> float:
        return float(np.min(self.upper_margin, initial=np.inf))

    @property
    def argmin_lower(self) -> float:
        return float(self.t_lower[np.argmin(self.lower_margin)]) if self.t_lower.size else np.nan

    @property
    def argmin_upper(self) -> float:
        return float(self.t_upper[np.argmin(self.upper_margin)]) if self.t_upper.size else np.nan

    @property
    def holds(self) -> bool:
        return self.min_lower >= -self.tol and self.min_upper >= -self.tol


def check_lemma21(R: int, t_grid, tol: float = 1e-12) -> MarginReport:
    """Log-domain margins of ``prod_{n>=R} <= exp(-2R V(t)) <= prod_{n>=R+1}``.

    ``lower_margin = -2RV - log prod_{n>=R}(1-R^2t^2/n^2)^2`` and
    ``upper_margin = log prod_{n>=R+1}(...)^2 + 2RV``; both must be >= 0.
    """
    if int(R) != R or R < 1:
        raise ParameterError("R must be a positive integer")
    R = int(R)
    t = np.asarray(t_grid, dtype=float)
    if np.any(np.abs(t) > 1):
        raise ParameterError("t_grid must lie in [-1, 1]")
    middle = -2.0 * R * eval_V(t)
    lower = 2.0 * log_tail_product(R, R * t)
    upper = 2.0 * log_tail_product(R + 1, R * t)
    with np.errstate(invalid="ignore"):
        lm = np.where(np.isneginf(lower), np.inf, middle - lower)
    um = upper - middle
    return MarginReport(t, lm, t, um, tol, {"R": R})


def check_prop1(config: PointConfiguration, R: float, N: int, alpha: float, beta: float,
                t_grid, tol: float = 0.0) -> MarginReport:
    """Margins of ``exp(-N(V(alpha t)+eps t)) <= w_R(t) <= exp(-N(V(t/alpha)+eps t))``.

    The upper bound is checked on all of ``t_grid`` and the lower bound on
    the points with ``|t| <= beta``; ``eps`` is ``epsilon_R(config, R, N)``.
    """
    _check_alpha(alpha)
    if not 0 < beta < 1:
        raise ParameterError("beta must lie in (0, 1)")
    if alpha * beta > 1:
        raise ParameterError("need alpha * beta <= 1 so that V(alpha t) is defined")
    t = np.asarray(t_grid, dtype=float)
    if np.any(np.abs(t) > 1):
        raise ParameterError("t_grid must lie in [-1, 1]")
    eps = epsilon_R(config, R, N)
    logw = log_rho_R(config, R, R * t)
    upper = -N * (eval_V(t / alpha) + eps * t) - logw
    inner = np.abs(t) <= beta
    tl = t[inner]
    lower = logw[inner] + N * (eval_V(alpha * tl) + eps * tl)
    at0 = t == 0
    eq0 = float(max(np.max(np.abs(upper[at0]), initial=0.0),
                    np.max(np.abs(lower[tl == 0]), initial=0.0)))
    return MarginReport(tl, lower, t, upper, tol,
                        {"R": R, "N": N, "eps_R": eps, "equality_at_zero": eq0})


def sweep_prop1(config: PointConfiguration, alpha: float, beta: float, R_values, t_grid,
                tol: float = 0.0):
    """Run :func:`check_prop1` over ``R_values`` with ``N = N(R)``.

    Returns ``(R_star, reports)`` where ``R_star`` is the smallest swept ``R``
    from which both inequalities hold for every larger swept ``R`` (``None``
    if the last one fails).
    """
    reports = []
    for R in R_values:
        N = count_points(config, R)
        reports.append(check_prop1(config, R, N, alpha, beta, t_grid, tol))
    R_star = None
    for R, rep in zip(reversed(list(R_values)), reversed(reports)):
        if not rep.holds:
            break
        R_star = R
    return R_star, reports
