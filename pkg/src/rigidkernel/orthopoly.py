"""Orthonormal polynomials for a discretized weight and their kernels.

The weight is discretized by a Gauss rule matched to its endpoint factor
(Legendre for smooth weights, Chebyshev of the first or second kind for
``(1-s^2)^{-1/2}`` and ``(1-s^2)^{1/2}``), and the three-term recurrence

    t phi_k(t) = b_{k+1} phi_{k+1}(t) + a_k phi_k(t) + b_k phi_{k-1}(t)

is built by the discretized Stieltjes procedure. Arrays are 0-based:
``a[k] = a_k`` for ``k < N`` and ``b[k] = b_{k+1}`` so ``b[0] = b_1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from rigidkernel.accurate import dot
from rigidkernel.errors import ParameterError, StabilityError
from rigidkernel.weights import WeightSpec

DIAGONAL_SWITCH = 1e-6
STABILITY_TOL = 1e-11


@dataclass(frozen=True)
class Quadrature:
    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]

    def integrate(self, values) -> float:
        return dot(self.weights, values)


def _affine(nodes, weights, interval, ref_length=2.0):
    lo, hi = interval
    half = (hi - lo) / 2
    return Quadrature((lo + hi) / 2 + half * nodes, weights * (half * 2 / ref_length), (lo, hi))


def _legendre_and_derivative(n, x):
    p0 = np.ones_like(x)
    p1 = x.copy()
    if n == 0:
        return p0, np.zeros_like(x)
    for k in range(1, n):
        p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
    dp = n * (x * p1 - p0) / (x * x - 1)
    return p1, dp


def gauss_legendre(order: int, interval=(-1.0, 1.0)) -> Quadrature:
    """Gauss-Legendre rule by Golub-Welsch, nodes polished by one Newton step."""
    if order < 1:
        raise ParameterError("order must be >= 1")
    if order == 1:
        return _affine(np.array([0.0]), np.array([2.0]), interval)
    k = np.arange(1, order)
    off = k / np.sqrt(4.0 * k * k - 1.0)
    x = eigh_tridiagonal(np.zeros(order), off, eigvals_only=True)
    p, dp = _legendre_and_derivative(order, x)
    x = x - p / dp
    x = 0.5 * (x - x[::-1])  # exact symmetry
    _, dp = _legendre_and_derivative(order, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    w = 0.5 * (w + w[::-1])
    return _affine(x, w, interval)


def gauss_chebyshev(order: int, kind: int, interval=(-1.0, 1.0)) -> Quadrature:
    """Gauss rule for ``(1-s^2)^{-1/2}`` (kind 1) or ``(1-s^2)^{1/2}`` (kind 2).

    Weights integrate ``f(t) (1 - s(t)^2)^{+-1/2} dt`` with ``s`` the affine map
    of ``interval`` onto ``[-1, 1]``.
    """
    if order < 1:
        raise ParameterError("order must be >= 1")
    i = np.arange(1, order + 1)
    if kind == 1:
        theta = (2 * i - 1) * np.pi / (2 * order)
        w = np.full(order, np.pi / order)
    elif kind == 2:
        theta = i * np.pi / (order + 1)
        w = np.pi / (order + 1) * np.sin(theta) ** 2
    else:
        raise ParameterError("kind must be 1 or 2")
    x = -np.cos(theta)
    x = 0.5 * (x - x[::-1])
    return _affine(x, w, interval)


def weight_quadrature(weight: WeightSpec, order: int):
    """Discretize ``weight`` as ``sum_i lam_i delta(t - t_i) * exp(shift)``.

    Returns ``(nodes, lam, shift)``; ``lam`` is rescaled by ``exp(-shift)`` with
    ``shift`` the largest log-weight sampled, so nothing overflows or
    underflows wholesale.
    """
    j = weight.jacobi
    if j == 0:
        q = gauss_legendre(order, weight.support)
    elif j == -0.5:
        q = gauss_chebyshev(order, 1, weight.support)
    elif j == 0.5:
        q = gauss_chebyshev(order, 2, weight.support)
    else:
        raise ParameterError(f"unsupported endpoint exponent {j}")
    logw = weight.log_smooth(q.nodes)
    shift = float(np.max(logw))
    lam = q.weights * np.exp(logw - shift)
    return q.nodes, lam, shift


@dataclass(frozen=True, eq=False)
class RecurrenceCoeffs:
    a: np.ndarray
    b: np.ndarray
    norm0: float
    weight: WeightSpec
    quad_order: int
    stable: bool | None = None
    stability_error: float | None = None

    @property
    def N(self) -> int:
        return self.a.size


def default_quad_order(N: int) -> int:
    return max(4 * N, 256)


def _stieltjes(nodes, lam, N):
    x = nodes
    live = int(np.count_nonzero(lam))
    if live <= N:
        raise StabilityError(
            f"only {live} quadrature nodes carry mass for degree {N}: "
            "quadrature order insufficient or weight underflow")
    mass = float(np.sum(lam))
    floor = 1e-13 * float(np.max(np.abs(x)))
    q_prev = np.zeros_like(x)
    q = np.sqrt(lam / mass)
    a = np.empty(N)
    b = np.empty(N)
    b_prev = 0.0
    for k in range(N):
        xq = x * q
        a[k] = dot(xq, q)
        r = xq - a[k] * q - b_prev * q_prev
        nrm2 = dot(r, r)
        if not np.isfinite(nrm2) or not np.sqrt(nrm2) > floor:
            raise StabilityError(
                f"recurrence lost positivity at k={k + 1}: "
                "quadrature order insufficient or weight underflow")
        b[k] = np.sqrt(nrm2)
        q_prev, q, b_prev = q, r / b[k], b[k]
    return a, b, mass


def stieltjes_recurrence(weight: WeightSpec, N: int, quad_order: int | None = None,
                         check_stability: bool = False) -> RecurrenceCoeffs:
    """Recurrence coefficients ``a_0..a_{N-1}``, ``b_1..b_N`` for ``weight``.

    With ``check_stability`` the coefficients are recomputed at twice the
    quadrature order; ``stable`` records agreement within ``1e-11``.
    """
    if N < 1:
        raise ParameterError("N must be >= 1")
    if quad_order is None:
        quad_order = default_quad_order(N)
    if quad_order < N + 1:
        raise ParameterError("quad_order must exceed N")
    nodes, lam, shift = weight_quadrature(weight, quad_order)
    a, b, mass = _stieltjes(nodes, lam, N)
    if weight.is_even():
        a[:] = 0.0
    stable = err = None
    if check_stability:
        nodes2, lam2, _ = weight_quadrature(weight, 2 * quad_order)
        a2, b2, _ = _stieltjes(nodes2, lam2, N)
        if weight.is_even():
            a2[:] = 0.0
        err = float(max(np.max(np.abs(a - a2)), np.max(np.abs(b - b2))))
        stable = err <= STABILITY_TOL
    return RecurrenceCoeffs(a, b, mass * np.exp(shift), weight, quad_order, stable, err)


def eval_all(coeffs: RecurrenceCoeffs, upto: int, x) -> np.ndarray:
    """Rows ``phi_0(x) .. phi_upto(x)``; shape ``(upto + 1,) + x.shape``."""
    if upto > coeffs.N:
        raise ParameterError(f"degree {upto} needs more than {coeffs.N} coefficients")
    x = np.asarray(x, dtype=float)
    out = np.empty((upto + 1,) + x.shape)
    a, b = coeffs.a, coeffs.b
    out[0] = 1.0 / np.sqrt(coeffs.norm0)
    if upto >= 1:
        out[1] = (x - a[0]) * out[0] / b[0]
    for k in range(1, upto):
        out[k + 1] = ((x - a[k]) * out[k] - b[k - 1] * out[k - 1]) / b[k]
    return out


def eval_orthonormal(coeffs: RecurrenceCoeffs, j: int, x):
    """``phi_j(x)``, positive leading coefficient, ``0 <= j <= N``."""
    if j < 0:
        raise ParameterError("degree must be nonnegative")
    return eval_all(coeffs, j, x)[j]


def _eval_with_derivative(coeffs, upto, x):
    x = np.asarray(x, dtype=float)
    a, b = coeffs.a, coeffs.b
    p = eval_all(coeffs, upto, x)
    dp = np.zeros_like(p)
    if upto >= 1:
        dp[1] = p[0] / b[0]
    for k in range(1, upto):
        dp[k + 1] = ((x - a[k]) * dp[k] + p[k] - b[k - 1] * dp[k - 1]) / b[k]
    return p, dp


def confluent_diagonal(coeffs: RecurrenceCoeffs, N: int, x):
    """``K^_N(x, x) = b_N (phi_N'(x) phi_{N-1}(x) - phi_{N-1}'(x) phi_N(x))``."""
    p, dp = _eval_with_derivative(coeffs, N, x)
    return coeffs.b[N - 1] * (dp[N] * p[N - 1] - dp[N - 1] * p[N])


def cd_kernel(coeffs: RecurrenceCoeffs, N: int, x, y, with_weight: bool = False):
    """Christoffel-Darboux kernel ``K_N`` (``with_weight``) or ``K^_N``.

    For ``|x - y| > 1e-6`` the closed form
    ``b_N (phi_N(x) phi_{N-1}(y) - phi_{N-1}(x) phi_N(y)) / (x - y)`` is used;
    closer pairs use the sum ``sum_{j<N} phi_j(x) phi_j(y)``, which is the
    confluent limit without its cancellation.
    """
    if not 1 <= N <= coeffs.N:
        raise ParameterError(f"N must lie in [1, {coeffs.N}]")
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    px = eval_all(coeffs, N, x)
    py = eval_all(coeffs, N, y)
    d = x - y
    far = np.abs(d) > DIAGONAL_SWITCH
    with np.errstate(divide="ignore", invalid="ignore"):
        closed = coeffs.b[N - 1] * (px[N] * py[N - 1] - px[N - 1] * py[N]) / d
    direct = np.sum(px[:N] * py[:N], axis=0)
    out = np.where(far, closed, direct)
    if with_weight:
        out = out * np.exp(0.5 * (coeffs.weight.log_weight(x) + coeffs.weight.log_weight(y)))
    return float(out) if out.ndim == 0 else out


def kernel_matrix(coeffs: RecurrenceCoeffs, N: int, xs, ys=None, with_weight: bool = False):
    """``[K(x_i, y_j)]`` by direct summation over the basis (grid evaluation)."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ys = xs if ys is None else np.atleast_1d(np.asarray(ys, dtype=float))
    px = eval_all(coeffs, N - 1, xs)
    py = px if ys is xs else eval_all(coeffs, N - 1, ys)
    K = px.T @ py
    if with_weight:
        sx = np.exp(0.5 * coeffs.weight.log_weight(xs))
        sy = sx if ys is xs else np.exp(0.5 * coeffs.weight.log_weight(ys))
        K = sx[:, None] * K * sy[None, :]
    return K


def christoffel_function(coeffs: RecurrenceCoeffs, N: int, x):
    """``lambda_N(x) = 1 / K^_N(x, x)``."""
    return 1.0 / cd_kernel(coeffs, N, x, x)


def gram_matrix(coeffs: RecurrenceCoeffs, N: int, quad_order: int | None = None) -> np.ndarray:
    """``[int phi_j phi_k w]_{j,k<N}`` on an independent, finer discretization."""
    order = quad_order or 2 * coeffs.quad_order + 1
    nodes, lam, shift = weight_quadrature(coeffs.weight, order)
    P = eval_all(coeffs, N - 1, nodes)
    G = np.empty((N, N))
    scale = np.exp(shift)
    for j in range(N):
        for k in range(j, N):
            G[j, k] = G[k, j] = dot(lam * P[j], P[k]) * scale
    return G


def kernel_trace(coeffs: RecurrenceCoeffs, N: int, quad_order: int | None = None) -> float:
    """``int K^_N(t, t) w(t) dt`` on an independent discretization; equals ``N``."""
    order = quad_order or 2 * coeffs.quad_order + 1
    nodes, lam, shift = weight_quadrature(coeffs.weight, order)
    P = eval_all(coeffs, N - 1, nodes)
    return dot(lam, np.sum(P * P, axis=0)) * np.exp(shift)


@dataclass
class KernelGrid:
    x_grid: np.ndarray
    y_grid: np.ndarray
    values: np.ndarray
    weight: WeightSpec
    N: int
    reference: np.ndarray | None = None
    sup_error: float | None = None
