"""Point configurations: a finite window of points plus a lattice tail.

A doubly infinite sequence ``... < p_{-1} < 0 <= p_0 < p_1 < ...`` is stored
as the points with ``|p| <= S`` together with a tail model. With a lattice
tail every point beyond the window is ``n + shift`` exactly, so sums and
products over the exterior have closed forms (digamma and log-gamma
differences) instead of truncations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import digamma

from rigidkernel.accurate import paired_sum
from rigidkernel.errors import ParameterError


@dataclass(frozen=True)
class LatticeTail:
    shift: float


@dataclass(frozen=True)
class NoTail:
    pass


@dataclass(frozen=True, eq=False)
class PointConfiguration:
    """Window points with ``|p| <= window_radius`` and a tail model.

    ``index_offset`` is the signed index of ``points[0]``; negative
    points get indices ``-1, -2, ...`` counting outwards from the origin and
    a point exactly at 0 gets index 0.
    """

    points: np.ndarray
    window_radius: float
    tail: LatticeTail | NoTail = field(default_factory=NoTail)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).ravel()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        S = float(self.window_radius)
        object.__setattr__(self, "window_radius", S)
        if not S > 0:
            raise ParameterError("window_radius must be positive")
        if pts.size and np.any(np.diff(pts) <= 0):
            raise ParameterError("points must be strictly increasing")
        if pts.size and np.max(np.abs(pts)) > S:
            raise ParameterError("stored points must satisfy |p| <= window_radius")
        if isinstance(self.tail, LatticeTail) and not abs(self.tail.shift) < 1:
            raise ParameterError("lattice shift must satisfy |shift| < 1")

    @property
    def index_offset(self) -> int:
        return -int(np.count_nonzero(self.points < 0))

    @property
    def has_tail(self) -> bool:
        return isinstance(self.tail, LatticeTail)

    def indices(self) -> np.ndarray:
        return np.arange(self.points.size) + self.index_offset

    def is_symmetric(self) -> bool:
        pts = self.points
        mirrored = np.array_equal(pts, -pts[::-1])
        if not self.has_tail:
            return mirrored
        return mirrored and _tail_starts(self.tail.shift, self.window_radius)[0] == \
            _tail_starts(self.tail.shift, self.window_radius)[1]

    def point(self, n: int) -> float:
        """Return ``p_n``, reaching into the lattice tail when needed."""
        n_neg = -self.index_offset
        n_pos = self.points.size - n_neg
        if -n_neg <= n < n_pos:
            return float(self.points[n + n_neg])
        if not self.has_tail:
            raise ParameterError(f"p_{n} lies outside the window of a tail-less configuration")
        a, b = _tail_starts(self.tail.shift, self.window_radius)
        if n >= n_pos:
            return a + (n - n_pos)
        return -(b + (-n - n_neg - 1))

    def exterior(self, R: float):
        """Split ``{p : |p| > R}`` into window parts and tail start points.

        Returns ``(pos, neg, a, b)``: ``pos`` are the window points ``> R``
        ascending, ``neg`` the magnitudes of window points ``< -R``
        ascending, and ``a``, ``b`` the first positive / negative lattice
        magnitudes beyond ``max(S, R)`` (``None`` without a tail).
        """
        pts = self.points
        pos = pts[pts > R]
        neg = -pts[pts < -R][::-1]
        if not self.has_tail:
            return pos, neg, None, None
        a, b = _tail_starts(self.tail.shift, max(self.window_radius, R))
        return pos, neg, a, b


def _tail_starts(shift: float, T: float) -> tuple[float, float]:
    """First lattice magnitudes strictly beyond ``T`` on each side."""
    a = math.floor(T - shift) + 1 + shift
    b = math.floor(T + shift) + 1 - shift
    return float(a), float(b)


def make_lattice_config(window_radius: float, shift: float) -> PointConfiguration:
    if not window_radius > 1:
        raise ParameterError("window_radius must exceed 1")
    if not abs(shift) < 1:
        raise ParameterError("|shift| must be < 1")
    if shift == 0:
        raise ParameterError("shift 0 puts a lattice point at the origin")
    S = float(window_radius)
    n = np.arange(math.ceil(-S - shift), math.floor(S - shift) + 1)
    pts = n + shift
    pts = pts[np.abs(pts) <= S]
    return PointConfiguration(pts, S, LatticeTail(float(shift)))


def make_jittered_config(window_radius: float, amplitude: float, exponent: float,
                         seed: int) -> PointConfiguration:
    """Half-integer lattice with bounded random displacements.

    ``p_n = n + 1/2 + d_n`` with ``|d_n| <= min(amplitude (1+|n|)^exponent, 0.49)``,
    so neighbours can never cross and the sign pattern of the lattice is kept.
    """
    if not 0 <= exponent < 1:
        raise ParameterError("exponent must lie in [0, 1)")
    if amplitude < 0:
        raise ParameterError("amplitude must be nonnegative")
    base = make_lattice_config(window_radius, 0.5)
    n = np.floor(base.points).astype(int)
    rng = np.random.default_rng(seed)
    u = rng.uniform(-1.0, 1.0, size=n.size)
    bound = np.minimum(amplitude * (1.0 + np.abs(n)) ** exponent, 0.49)
    pts = base.points + bound * u
    S = base.window_radius
    pts = np.clip(pts, -S, S)
    return PointConfiguration(pts, S, LatticeTail(0.5))


def count_points(config: PointConfiguration, R: float) -> int:
    """``N(R) = #{p_n : |p_n| <= R}``."""
    inside = int(np.count_nonzero(np.abs(config.points) <= R))
    S = config.window_radius
    if R <= S:
        return inside
    if not config.has_tail:
        raise ParameterError("R exceeds the window of a tail-less configuration")
    a, b = _tail_starts(config.tail.shift, S)
    extra = sum(math.floor(R - start) + 1 for start in (a, b) if R >= start)
    return inside + extra


def tail_reciprocal_sum(a: float, b: float) -> float:
    """``sum_{k>=0} (1/(a+k) - 1/(b+k)) = digamma(b) - digamma(a)``."""
    if a == b:
        return 0.0
    return float(digamma(b) - digamma(a))


def exterior_reciprocal_sum(config: PointConfiguration, R: float) -> float:
    """Principal value of ``sum_{|p_n| > R} 1/p_n``."""
    if not config.has_tail:
        raise ParameterError("exterior sums need a tail model; configuration has none")
    pos, neg, a, b = config.exterior(R)
    return paired_sum(1.0 / pos, -1.0 / neg) + tail_reciprocal_sum(a, b)


def epsilon_R(config: PointConfiguration, R: float, N: int) -> float:
    """``(2R/N) * sum_{|p_n|>R} 1/p_n``, the linear tilt of the comparison fields."""
    if N < 1:
        raise ParameterError("N must be >= 1")
    return 2.0 * R / N * exterior_reciprocal_sum(config, R)


@dataclass
class AssumptionReport:
    monotone: bool
    pv_partial_sums: list[tuple[float, float]]
    ratio_samples: list[tuple[int, float]]
    pv_estimate: float
    max_ratio_deviation: float
    pv_converged: bool = True
    ratio_ok: bool = True
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.monotone and self.pv_converged and self.ratio_ok


def check_assumptions(config: PointConfiguration, S_grid, ratio_min_index: int = 10,
                      ratio_tol: float = 0.2) -> AssumptionReport:
    """Diagnose monotonicity, principal-value convergence and ``p_n/n -> 1``.

    Partial sums run over ``0 < |p_n| < S`` for each ``S`` in ``S_grid``;
    with a lattice tail the full principal value is added analytically.
    """
    S_grid = [float(s) for s in S_grid]
    if any(t <= s for s, t in zip(S_grid, S_grid[1:])):
        raise ParameterError("S_grid must be increasing")
    if S_grid and S_grid[-1] > config.window_radius:
        raise ParameterError("S_grid exceeds the window radius")

    pts = config.points
    notes = []
    monotone = bool(np.all(np.diff(pts) > 0))
    neg = pts[pts < 0]
    nonneg = pts[pts >= 0]
    if neg.size and nonneg.size and not neg[-1] < 0 <= nonneg[0]:
        monotone = False

    partial = []
    for S in S_grid:
        p = pts[(np.abs(pts) < S) & (pts != 0)]
        partial.append((S, paired_sum(1.0 / p[p > 0], 1.0 / p[p < 0][::-1])))

    nz = pts[pts != 0]
    window_total = paired_sum(1.0 / nz[nz > 0], 1.0 / nz[nz < 0][::-1])
    if config.has_tail:
        a, b = _tail_starts(config.tail.shift, config.window_radius)
        pv = window_total + tail_reciprocal_sum(a, b)
    else:
        pv = window_total
        notes.append("principal value defined only on window")

    if partial:
        S_last, last = partial[-1]
        pv_converged = bool(np.isfinite(pv) and abs(last - pv) <= 2.0 / S_last)
    else:
        pv_converged = bool(np.isfinite(pv))

    n_neg = -config.index_offset
    n_pos = pts.size - n_neg
    if config.has_tail:
        reach = 4 * max(n_pos, n_neg, 1)
        pos_limit, neg_limit = reach, reach
    else:
        pos_limit, neg_limit = n_pos - 1, n_neg
    samples = []
    k = 1
    while k <= max(pos_limit, neg_limit):
        if k <= pos_limit:
            samples.append((k, config.point(k) / k))
        if k <= neg_limit:
            samples.append((-k, config.point(-k) / -k))
        k *= 2
    far = [abs(r - 1.0) for n, r in samples if abs(n) >= ratio_min_index]
    max_dev = max(far) if far else float("nan")
    ratio_ok = bool(far) and max_dev <= ratio_tol
    if not far:
        notes.append(f"no ratio samples with |n| >= {ratio_min_index}")

    return AssumptionReport(monotone, partial, samples, pv, max_dev, pv_converged,
                            ratio_ok, notes)


def write_config(config: PointConfiguration, path) -> None:
    lines = [f"window_radius={float(config.window_radius)!r}"]
    if config.has_tail:
        lines.append(f"tail=lattice:{float(config.tail.shift)!r}")
    else:
        lines.append("tail=none")
    lines.extend(repr(float(p)) for p in config.points)
    Path(path).write_text("\n".join(lines) + "\n")


def read_config(path) -> PointConfiguration:
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if len(lines) < 2 or not lines[0].startswith("window_radius=") \
            or not lines[1].startswith("tail="):
        raise ParameterError(f"{path}: not a point configuration file")
    S = float(lines[0].split("=", 1)[1])
    spec = lines[1].split("=", 1)[1]
    if spec == "none":
        tail = NoTail()
    elif spec.startswith("lattice:"):
        tail = LatticeTail(float(spec.split(":", 1)[1]))
    else:
        raise ParameterError(f"{path}: unknown tail model {spec!r}")
    return PointConfiguration(np.array([float(x) for x in lines[2:]]), S, tail)
