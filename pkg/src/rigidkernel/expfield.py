"""Bulk universality for ``(1-t^2)^{+-1/2} exp(-N V_{alpha,eps}(t))`` on ``[-1, 1]``.

These analytic weights are the building blocks behind the comparison
weights; here their kernels are computed directly from the recurrence and
compared with the sine kernel after unfolding by the equilibrium density.
"""

from __future__ import annotations

import numpy as np

from rigidkernel.equilibrium import EquilibriumParams, c_alpha, psi_alpha_eps
from rigidkernel.errors import ParameterError
from rigidkernel.orthopoly import cd_kernel, default_quad_order, stieltjes_recurrence
from rigidkernel.universality import scaled_sine_kernel, sine_kernel
from rigidkernel.weights import ComparisonMinus, ComparisonPlus, ExpField


def expfield_coefficients(alpha, eps, N, jacobi_exponent=-0.5, quad_order=None):
    EquilibriumParams(alpha, eps)
    w = ExpField(alpha, eps, N, jacobi_exponent)
    return stieltjes_recurrence(w, N, quad_order or default_quad_order(N))


def expfield_kernel(alpha: float, eps: float, N: int, jacobi_exponent: float = -0.5,
                    x0: float = 0.0, x=0.0, y=0.0, quad_order: int | None = None,
                    coeffs=None):
    """``K_N(x0 + x/(psi N), x0 + y/(psi N)) / (psi N)`` with ``psi = psi_{alpha,eps}(x0)``."""
    params = EquilibriumParams(alpha, eps)
    if abs(eps) >= params.eps_alpha and params.eps_alpha > 0:
        raise ParameterError("need |eps| < eps_alpha")
    if not abs(x0) < 1:
        raise ParameterError("x0 must lie in (-1, 1)")
    psi = float(psi_alpha_eps(params, x0))
    s = psi * N
    u = x0 + np.asarray(x, dtype=float) / s
    v = x0 + np.asarray(y, dtype=float) / s
    if np.any(np.abs(u) >= 1) or np.any(np.abs(v) >= 1):
        raise ParameterError("rescaled arguments leave (-1, 1)")
    if coeffs is None:
        coeffs = expfield_coefficients(alpha, eps, N, jacobi_exponent, quad_order)
    return cd_kernel(coeffs, N, u, v, with_weight=True) / s


def expfield_error(alpha, eps, N, jacobi_exponent=-0.5, x0=0.0, x=0.5, y=-0.5,
                   quad_order=None):
    k = expfield_kernel(alpha, eps, N, jacobi_exponent, x0, x, y, quad_order)
    return abs(k - sine_kernel(x, y))


def prop22b_check(alpha: float, eps: float, N: int, x, y, quad_order: int | None = None):
    """``(1/N) K_N(x/N, y/N; w+-)`` against ``sin(pi c+- (x-y)) / (pi (x-y))``.

    Returns ``{'+': (values, limits), '-': (values, limits)}``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    order = quad_order or default_quad_order(N)
    out = {}
    for sign, cls in (("+", ComparisonPlus), ("-", ComparisonMinus)):
        coeffs = stieltjes_recurrence(cls(alpha, eps, N), N, order)
        vals = cd_kernel(coeffs, N, x / N, y / N, with_weight=True) / N
        out[sign] = (vals, scaled_sine_kernel(c_alpha(sign, alpha), x, y))
    return out


def minus_rescaling_gap(alpha: float, eps: float, N: int, x, y, quad_order=None) -> float:
    """Residual of ``K_N(x,y;w-) = alpha^2 K_N(alpha^2 x, alpha^2 y; ExpField(alpha, eps/alpha^2, +1/2))``."""
    order = quad_order or default_quad_order(N)
    a2 = alpha * alpha
    left = stieltjes_recurrence(ComparisonMinus(alpha, eps, N), N, order)
    right = stieltjes_recurrence(ExpField(alpha, eps / a2, N, 0.5), N, order)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    kl = cd_kernel(left, N, x, y, with_weight=True)
    kr = a2 * cd_kernel(right, N, a2 * x, a2 * y, with_weight=True)
    return float(np.max(np.abs(kl - kr)))
