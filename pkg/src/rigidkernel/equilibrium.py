"""Equilibrium measures for the fields ``V(x/alpha) + eps x`` on ``[-1, 1]``.

Closed-form densities, logarithmic potentials computed by quadrature, the
variational check ``2 U + V = const``, a discretized energy minimizer used
as an independent oracle, and the phase function ``xi`` on the ellipses
``|phi(z)| = tau``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, linalg

from rigidkernel.errors import ParameterError
from rigidkernel.orthopoly import gauss_legendre
from rigidkernel.weights import eval_V


@dataclass(frozen=True)
class EquilibriumParams:
    alpha: float
    eps: float = 0.0

    def __post_init__(self):
        if not self.alpha >= 1:
            raise ParameterError("alpha must be >= 1")
        if abs(self.eps) > self.eps_alpha * (1 + 1e-15):
            raise ParameterError(
                f"|eps| = {abs(self.eps)} exceeds eps_alpha = {self.eps_alpha}")

    @property
    def eps_alpha(self) -> float:
        return eps_alpha(self.alpha)


def eps_alpha(alpha: float) -> float:
    """``2 sqrt(1 - alpha^-2)``, the largest admissible tilt."""
    return 2.0 * math.sqrt(1.0 - alpha ** -2)


def field_V(params: EquilibriumParams, x):
    """External field ``V(x/alpha) + eps x``."""
    x = np.asarray(x, dtype=float)
    return eval_V(x / params.alpha) + params.eps * x


def rho_alpha_eps(params: EquilibriumParams, x):
    """``2 pi sqrt(1-x^2) psi(x)``, analytic in ``C`` minus ``|Re x| >= alpha``.

    Accepts complex ``x``; ``q arctan(q/c)`` is even in ``q = sqrt(1-x^2)``,
    so the branch of the square root does not matter.
    """
    alpha, eps = params.alpha, params.eps
    x = np.asarray(x)
    q = np.sqrt((1 - x * x) + 0j)
    if alpha == 1:
        out = np.pi * q
        return out if np.iscomplexobj(x) else out.real
    c = math.sqrt(alpha * alpha - 1)
    body = q * np.arctan(q / c)
    if not np.iscomplexobj(x):
        body = body.real
    return params.eps_alpha - eps * x + (2.0 / alpha) * body


def rho_derivative(params: EquilibriumParams, z):
    """Derivative of :func:`rho_alpha_eps`; valid for ``alpha > 1``."""
    alpha = params.alpha
    c = math.sqrt(alpha * alpha - 1)
    z = np.asarray(z, dtype=complex)
    q2 = 1 - z * z
    q = np.sqrt(q2)
    small = np.abs(q2) < 1e-6
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(small, 1 / c - q2 / (3 * c ** 3) + q2 * q2 / (5 * c ** 5),
                         np.arctan(q / c) / q)
    return -params.eps - (2.0 / alpha) * z * (ratio + c / (alpha * alpha - z * z))


def psi_alpha_eps(params: EquilibriumParams, x):
    """Equilibrium density on ``(-1, 1)`` for the field ``V(x/alpha) + eps x``.

    ``(2 sqrt(a^2-1) - a eps x) / (2 a pi sqrt(1-x^2))
    + arctan(sqrt(1-x^2) / sqrt(a^2-1)) / (a pi)``; constant ``1/2`` at ``a = 1``.
    """
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) >= 1):
        raise ParameterError("psi is evaluated on the open interval (-1, 1)")
    return psi_formula(params.alpha, params.eps, x)


def psi_formula(alpha: float, eps: float, x):
    """The density expression without the ``|eps| <= eps_alpha`` check."""
    x = np.asarray(x, dtype=float)
    if alpha == 1:
        return np.full(x.shape, 0.5) if x.ndim else 0.5
    c = math.sqrt(alpha * alpha - 1)
    s = np.sqrt(1 - x * x)
    out = (2 * c - alpha * eps * x) / (2 * alpha * np.pi * s) + np.arctan(s / c) / (alpha * np.pi)
    return float(out) if out.ndim == 0 else out


def psi_alpha_0(alpha: float, x):
    """Balayage form of the ``eps = 0`` density."""
    x = np.asarray(x, dtype=float)
    c = math.sqrt(alpha * alpha - 1)
    s = np.sqrt(1 - x * x)
    return 1 / (2 * alpha) + (c - s * np.arctan(c / s)) / (alpha * np.pi * s)


def nu_density(x):
    """Density ``x / (pi sqrt(1-x^2))`` of the signed measure with potential ``x``."""
    x = np.asarray(x, dtype=float)
    return x / (np.pi * np.sqrt(1 - x * x))


def arcsine_density(x):
    x = np.asarray(x, dtype=float)
    return 1 / (np.pi * np.sqrt(1 - x * x))


def psi_at_zero(alpha: float) -> float:
    """``1/(2a) + (sqrt(a^2-1) - arctan sqrt(a^2-1)) / (a pi)``."""
    if alpha < 1:
        raise ParameterError("alpha must be >= 1")
    c = math.sqrt(alpha * alpha - 1)
    return 1 / (2 * alpha) + (c - math.atan(c)) / (alpha * math.pi)


def c_alpha(sign: str, alpha: float) -> float:
    """Local densities ``c^+ = psi(0)`` and ``c^- = alpha^2 psi(0)``."""
    p0 = psi_at_zero(alpha)
    if sign in ("+", "plus"):
        return p0
    if sign in ("-", "minus"):
        return alpha * alpha * p0
    raise ParameterError(f"sign must be '+' or '-', got {sign!r}")


# --------------------------------------------------------------------------
# potentials


def _theta_density(density, weighted):
    if weighted:
        return lambda th: density(np.cos(th))
    return lambda th: density(np.cos(th)) * np.sin(th)


def log_potential(density, x: float, weighted: bool = False) -> float:
    """``U(x) = int_{-1}^{1} log(1/|x-t|) density(t) dt`` for ``|x| < 1``.

    After ``t = cos(th)`` the integrand is ``g(th) = density(cos th) sin th``
    (pass ``weighted=True`` if ``density`` already returns that product as a
    function of ``t``). The log singularity at ``th_x = arccos x`` is
    subtracted: ``int_0^pi log|x - cos th| dth = -pi log 2`` exactly, and the
    remainder ``log|x - cos th| (g(th) - g(th_x))`` is integrated adaptively
    with a breakpoint at ``th_x``.
    """
    if not abs(x) < 1:
        raise ParameterError("log_potential needs |x| < 1")
    g = _theta_density(density, weighted)
    thx = math.acos(x)
    gx = float(g(thx))

    def remainder(th):
        d = abs(x - math.cos(th))
        if d == 0:
            return 0.0
        return math.log(d) * (float(g(th)) - gx)

    opts = dict(epsabs=1e-13, epsrel=1e-13, limit=400)
    left, _ = integrate.quad(remainder, 0.0, thx, **opts)
    right, _ = integrate.quad(remainder, thx, math.pi, **opts)
    return gx * math.pi * math.log(2.0) - (left + right)


def total_mass(density, weighted: bool = False, order: int = 200) -> float:
    g = _theta_density(density, weighted)
    q = gauss_legendre(order, (0.0, math.pi))
    return float(np.dot(q.weights, g(q.nodes)))


@dataclass
class EquilibriumReport:
    normalization: float
    ell_estimate: float
    max_variational_deviation: float
    density_min: float
    grid: np.ndarray
    psi: np.ndarray = field(repr=False, default=None)
    two_U_plus_V: np.ndarray = field(repr=False, default=None)


def verify_variational(params: EquilibriumParams, grid=None) -> EquilibriumReport:
    """Evaluate ``2 U^mu + V_{alpha,eps}`` on ``grid`` for the closed-form density."""
    if grid is None:
        grid = np.linspace(-0.99, 0.99, 101)
    grid = np.asarray(grid, dtype=float)
    rho = lambda t: rho_alpha_eps(params, t) / (2 * np.pi)  # noqa: E731
    values = np.array([2 * log_potential(rho, float(x), weighted=True) for x in grid])
    values = values + field_V(params, grid)
    ell = float(np.median(values))
    psi = psi_alpha_eps(params, grid)
    return EquilibriumReport(
        normalization=total_mass(rho, weighted=True),
        ell_estimate=ell,
        max_variational_deviation=float(np.max(np.abs(values - ell))),
        density_min=float(np.min(psi)),
        grid=grid, psi=psi, two_U_plus_V=values)


# --------------------------------------------------------------------------
# discrete energy minimization (oracle)


def _G(u):
    au = np.abs(u)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = u * u * np.log(au) / 2 - 0.75 * u * u
    return np.where(au == 0, 0.0, val)


def _cell_log_kernel(edges):
    """``A_ij = int_{I_i} int_{I_j} log(1/|s-t|) ds dt / (|I_i| |I_j|)``."""
    a, b = edges[:-1], edges[1:]
    c, d = a[None, :], b[None, :]
    a, b = a[:, None], b[:, None]
    integral = _G(b - c) - _G(a - c) - _G(b - d) + _G(a - d)
    h = edges[1:] - edges[:-1]
    return -integral / (h[:, None] * h[None, :])


def discrete_equilibrium(field, n_cells: int = 200, edges=None):
    """Minimize ``sum m_i m_j A_ij + sum m_i W_i`` over the probability simplex.

    Cells have Chebyshev-spaced edges on ``[-1, 1]``; ``W_i`` is the cell
    average of ``field``. The KKT system ``2 A m + W = ell`` is solved with an
    active set that drops cells whose mass would go negative. Returns
    ``(edges, masses, ell)``.
    """
    if edges is None:
        edges = -np.cos(np.linspace(0, np.pi, n_cells + 1))
    edges = np.asarray(edges, dtype=float)
    n = edges.size - 1
    A = _cell_log_kernel(edges)
    q = gauss_legendre(8)
    W = np.empty(n)
    for i in range(n):
        lo, hi = edges[i], edges[i + 1]
        t = (lo + hi) / 2 + (hi - lo) / 2 * q.nodes
        W[i] = np.dot(q.weights, field(t)) / 2
    active = np.ones(n, dtype=bool)
    for _ in range(n):
        idx = np.flatnonzero(active)
        k = idx.size
        M = np.zeros((k + 1, k + 1))
        M[:k, :k] = 2 * A[np.ix_(idx, idx)]
        M[:k, k] = -1.0
        M[k, :k] = 1.0
        rhs = np.concatenate([-W[idx], [1.0]])
        sol = linalg.solve(M, rhs)
        m = sol[:k]
        if np.all(m >= 0):
            masses = np.zeros(n)
            masses[idx] = m
            return edges, masses, float(sol[k])
        active[idx[m < 0]] = False
    raise RuntimeError("active set iteration did not converge")


def cell_masses(params: EquilibriumParams, edges) -> np.ndarray:
    """Exact masses of ``mu_{alpha,eps}`` on the cells, by quadrature in ``th``."""
    th_edges = np.arccos(np.clip(edges, -1, 1))
    q = gauss_legendre(16)
    out = np.empty(len(edges) - 1)
    for i in range(out.size):
        lo, hi = th_edges[i + 1], th_edges[i]
        th = (lo + hi) / 2 + (hi - lo) / 2 * q.nodes
        out[i] = (hi - lo) / 2 * np.dot(q.weights, rho_alpha_eps(params, np.cos(th))) / (2 * np.pi)
    return out


def total_variation_to_oracle(params: EquilibriumParams, n_cells: int = 200) -> float:
    edges, masses, _ = discrete_equilibrium(lambda t: field_V(params, t), n_cells)
    return 0.5 * float(np.sum(np.abs(masses - cell_masses(params, edges))))


# --------------------------------------------------------------------------
# xi on ellipses


def sqrt_z2m1(z):
    """``(z^2-1)^{1/2}`` analytic off ``[-1, 1]`` and positive for ``z > 1``."""
    z = np.asarray(z, dtype=complex)
    return np.sqrt(z - 1) * np.sqrt(z + 1)


def joukowski_phi(z):
    """Conformal map ``z + (z^2-1)^{1/2}`` of the exterior of ``[-1, 1]``."""
    return np.asarray(z, dtype=complex) + sqrt_z2m1(z)


def ellipse_points(tau: float, n: int = 720) -> np.ndarray:
    """``n`` points of ``Gamma_tau`` at mid-angles (never on the real axis)."""
    theta = 2 * np.pi * (np.arange(n) + 0.5) / n
    w = tau * np.exp(1j * theta)
    return 0.5 * (w + 1 / w)


def xi(params: EquilibriumParams, z: complex) -> complex:
    """``int_1^z rho(s) / (s^2-1)^{1/2} ds`` along the segment from 1 to ``z``.

    With ``s = 1 + (z-1) u^2`` the endpoint singularity disappears:
    the integrand becomes ``2 rho(s) sqrt(z-1) / sqrt(s+1)`` on ``u in [0, 1]``.
    """
    z = complex(z)
    if z == 1:
        return 0j
    if z.imag == 0 and z.real < 1:
        raise ParameterError("xi is defined off (-inf, 1)")
    if z.imag == 0 and abs(z.real) >= params.alpha:
        raise ParameterError("z lies outside the domain of analyticity")
    r = np.sqrt(z - 1)

    def f(u):
        s = 1 + (z - 1) * u * u
        return complex(2 * rho_alpha_eps(params, np.complex128(s)) * r / np.sqrt(s + 1))

    val, _ = integrate.quad(f, 0.0, 1.0, complex_func=True, epsabs=1e-13, epsrel=1e-12,
                            limit=200)
    return val


def min_re_xi_on_ellipse(params: EquilibriumParams, tau: float, n: int = 720):
    """Minimum of ``Re xi`` over ``n`` samples of ``Gamma_tau``; returns ``(min, z_at_min)``."""
    limit = float(joukowski_phi(params.alpha).real)
    if not 1 < tau < limit:
        raise ParameterError(f"tau must lie in (1, {limit})")
    zs = ellipse_points(tau, n)
    upper = zs[zs.imag > 0]
    re = np.array([xi(params, z).real for z in upper])
    # Re xi(conj z) = Re xi(z)
    i = int(np.argmin(re))
    return float(re[i]), complex(upper[i])


def rho_derivative_bound(params: EquilibriumParams, tau: float, n_theta: int = 720,
                         n_radial: int = 40) -> float:
    """``max |rho'|`` sampled on confocal ellipses filling ``int(Gamma_tau)``."""
    zs = [ellipse_points(r, n_theta) for r in np.linspace(1.0, tau, n_radial)]
    return float(np.max(np.abs(rho_derivative(params, np.concatenate(zs)))))


def xi_lower_bound(params: EquilibriumParams, tau: float, M: float | None = None) -> float:
    """``(eps_alpha - |eps|) log tau - M (tau - 1)^2``."""
    if M is None:
        M = rho_derivative_bound(params, tau)
    return (params.eps_alpha - abs(params.eps)) * math.log(tau) - M * (tau - 1) ** 2
