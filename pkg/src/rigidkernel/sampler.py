"""Finite-window samples of the sine process.

The sine kernel restricted to ``[-L, L]`` is discretized by Gauss-Legendre
(Nystrom), eigenfunctions are kept with probability equal to their
eigenvalue, and points are drawn one at a time from the projection kernel
of the kept eigenfunctions (the spectral algorithm of Hough, Krishnapur,
Peres and Virag).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from rigidkernel.errors import ParameterError
from rigidkernel.orthopoly import gauss_legendre
from rigidkernel.pointconf import LatticeTail, PointConfiguration, _tail_starts

NODES_PER_UNIT = 8
FINE_PER_UNIT = 64


def sine_kernel(x, y):
    """``sin(pi (x-y)) / (pi (x-y))`` with value 1 on the diagonal."""
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    return np.sinc(d)


@dataclass
class DppSample:
    points: np.ndarray
    window: float
    eigenvalue_spectrum: np.ndarray
    seed: int


def sine_operator_discretization(L: float, quadrature_order: int | None = None):
    """Nodes, weights and ``sqrt(w_i) K(x_i, x_j) sqrt(w_j)`` on ``[-L, L]``."""
    if L <= 0:
        raise ParameterError("L must be positive")
    if quadrature_order is None:
        quadrature_order = math.ceil(NODES_PER_UNIT * L)
    if quadrature_order < NODES_PER_UNIT * L:
        raise ParameterError(f"quadrature_order must be >= {NODES_PER_UNIT} L")
    q = gauss_legendre(quadrature_order, (-L, L))
    sw = np.sqrt(q.weights)
    A = sw[:, None] * sine_kernel(q.nodes[:, None], q.nodes[None, :]) * sw[None, :]
    A = 0.5 * (A + A.T)
    return q.nodes, q.weights, A


class _SineSpectrum:
    """Eigen-decomposition of the discretized operator, reusable across seeds."""

    def __init__(self, L, quadrature_order=None):
        self.L = float(L)
        nodes, weights, A = sine_operator_discretization(L, quadrature_order)
        lam, vec = linalg.eigh(A)
        self.nodes, self.weights = nodes, weights
        self.eigenvalues = lam
        self.clipped = np.clip(lam, 0.0, 1.0)
        # f_k(x_i) = v_ik / sqrt(w_i), orthonormal in L^2[-L, L]
        self._coef = vec * np.sqrt(weights)[:, None]
        n_fine = max(2, math.ceil(2 * FINE_PER_UNIT * L))
        self.h = 2 * L / n_fine
        self.fine = -L + self.h * (np.arange(n_fine) + 0.5)

    def eigenfunctions(self, x, keep):
        """Nystrom interpolation ``f_k(x) = lam_k^-1 sum_j K(x, x_j) w_j f_k(x_j)``."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        K = sine_kernel(x[:, None], self.nodes[None, :])
        return (K @ self._coef[:, keep]) / self.eigenvalues[keep]

    def sample(self, rng):
        """Sequential draws from the projection kernel of a Bernoulli-kept subset.

        The conditional density after ``j`` points is
        ``K(x,x) - sum_{l<j} e_l(x)^2`` where ``e_l`` are the columns of the
        incremental Cholesky factor of ``K`` at the chosen points.
        """
        keep = np.flatnonzero(rng.random(self.clipped.size) < self.clipped)
        k = keep.size
        if k == 0:
            return np.empty(0)
        F = self.eigenfunctions(self.fine, keep)
        dens = np.sum(F * F, axis=1)
        E = np.zeros((self.fine.size, k))
        L = np.zeros((k, k))
        chosen = np.zeros((k, k))
        pts = np.empty(k)
        for j in range(k):
            p = np.clip(dens, 0.0, None)
            i = rng.choice(p.size, p=p / p.sum())
            x = self.fine[i] + self.h * (rng.random() - 0.5)
            phix = self.eigenfunctions(x, keep)[0]
            ex = linalg.solve_triangular(L[:j, :j], chosen[:j] @ phix, lower=True) if j else \
                np.empty(0)
            d = math.sqrt(max(phix @ phix - ex @ ex, 1e-300))
            col = (F @ phix - E[:, :j] @ ex) / d
            E[:, j] = col
            dens -= col * col
            L[j, :j], L[j, j] = ex, d
            chosen[j] = phix
            pts[j] = x
        return np.sort(pts)


def sample_sine_dpp(L: float, quadrature_order: int | None = None, seed: int = 0,
                    spectrum: _SineSpectrum | None = None) -> DppSample:
    """One sample of the sine process restricted to ``[-L, L]``."""
    if spectrum is None:
        spectrum = _SineSpectrum(L, quadrature_order)
    rng = np.random.default_rng(seed)
    pts = spectrum.sample(rng)
    return DppSample(pts, float(L), spectrum.clipped.copy(), seed)


def sample_many(L: float, seeds, quadrature_order: int | None = None) -> list[DppSample]:
    spectrum = _SineSpectrum(L, quadrature_order)
    return [sample_sine_dpp(L, seed=s, spectrum=spectrum) for s in seeds]


def to_configuration(sample: DppSample, collision_tol: float = 1e-9) -> PointConfiguration:
    """Graft a half-integer lattice beyond the sampled window.

    The window radius is ``L``; if a sampled point comes within
    ``collision_tol`` of the first lattice point on either side, the window
    grows by one unit so the lattice starts one site further out.
    """
    pts = np.sort(np.asarray(sample.points, dtype=float))
    S = float(sample.window)
    while True:
        a, b = _tail_starts(0.5, S)
        hi = pts[-1] if pts.size else -np.inf
        lo = pts[0] if pts.size else np.inf
        if a - hi > collision_tol and lo + b > collision_tol:
            break
        S += 1.0
    pts = pts[np.abs(pts) <= S]
    return PointConfiguration(pts, S, LatticeTail(0.5))


def pair_correlation(samples, L: float, bins) -> tuple[np.ndarray, np.ndarray]:
    """Empirical ``rho_2(r) / rho_1^2`` for separations in ``bins``.

    Pairs are counted over the whole window and normalized by the expected
    count for a Poisson process of unit intensity, which corrects for the
    window edge through the overlap length ``2L - r``.
    """
    bins = np.asarray(bins, dtype=float)
    counts = np.zeros(bins.size - 1)
    for s in samples:
        p = np.asarray(s.points if hasattr(s, "points") else s)
        d = np.abs(p[:, None] - p[None, :])[np.triu_indices(p.size, 1)]
        counts += np.histogram(d, bins)[0]
    lo, hi = bins[:-1], bins[1:]
    # int_lo^hi (2L - r) dr
    expected = (2 * L * (hi - lo) - 0.5 * (hi ** 2 - lo ** 2)) * len(samples)
    centers = 0.5 * (lo + hi)
    return centers, counts / expected
