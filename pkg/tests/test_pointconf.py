import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rigidkernel.errors import ParameterError
from rigidkernel.pointconf import (LatticeTail, NoTail, PointConfiguration, check_assumptions,
                                   count_points, epsilon_R, exterior_reciprocal_sum,
                                   make_jittered_config, make_lattice_config, read_config,
                                   write_config)

# Richardson extrapolation 2 f(2S) - f(S) of the brute-force principal value
# sum over the shift-0.25 lattice, S = 1e6 and 2e6; see scripts/oracles.py.
EPS_R_QUARTER_R20_N40 = 0.024996096795960907


def test_half_lattice_points():
    cfg = make_lattice_config(10, 0.5)
    assert cfg.points.size == 20
    assert np.array_equal(cfg.points, np.arange(-9.5, 10))
    assert cfg.point(0) == 0.5 and cfg.point(-1) == -0.5


def test_quarter_lattice_points():
    cfg = make_lattice_config(3, 0.25)
    assert np.allclose(cfg.points, [-2.75, -1.75, -0.75, 0.25, 1.25, 2.25], atol=0)


def test_lattice_rejects_point_at_origin():
    with pytest.raises(ParameterError):
        make_lattice_config(10, 0.0)
    with pytest.raises(ParameterError):
        make_lattice_config(1, 0.5)


def test_zero_point_gets_index_zero():
    cfg = PointConfiguration([-1.5, 0.0, 1.0], 2.0, LatticeTail(0.5))
    assert cfg.point(0) == 0.0
    assert cfg.point(-1) == -1.5
    assert list(cfg.indices()) == [-1, 0, 1]


def test_point_reaches_into_tail():
    cfg = make_lattice_config(10, 0.5)
    assert cfg.point(10) == 10.5
    assert cfg.point(-11) == -10.5
    assert cfg.point(25) == 25.5


def test_invalid_configurations():
    with pytest.raises(ParameterError):
        PointConfiguration([1.0, 0.5], 2.0)
    with pytest.raises(ParameterError):
        PointConfiguration([0.5, 3.0], 2.0)
    with pytest.raises(ParameterError):
        PointConfiguration([0.5], 2.0, LatticeTail(1.0))


def test_jitter_zero_amplitude_is_lattice():
    a = make_jittered_config(20, 0.0, 0.4, seed=3)
    b = make_lattice_config(20, 0.5)
    assert np.array_equal(a.points, b.points)


def test_jitter_deterministic():
    a = make_jittered_config(50, 0.3, 0.4, seed=7)
    b = make_jittered_config(50, 0.3, 0.4, seed=7)
    assert np.array_equal(a.points, b.points)


@pytest.mark.parametrize("S", [50, 500])
def test_jittered_passes_assumptions(S):
    cfg = make_jittered_config(S, 0.3, 0.4, seed=7)
    rep = check_assumptions(cfg, [S / 8, S / 4, S / 2, S])
    assert rep.monotone and rep.pv_converged and rep.ratio_ok


def test_symmetric_partial_sums_vanish():
    cfg = make_lattice_config(40, 0.5)
    rep = check_assumptions(cfg, [5, 10, 20, 40])
    assert all(v == 0.0 for _, v in rep.pv_partial_sums)
    assert rep.pv_estimate == 0.0
    assert rep.passed


def test_quarter_partial_sums_converge(quarter_lattice):
    rep = check_assumptions(quarter_lattice, [7.5, 15, 30, 60])
    vals = [v for _, v in rep.pv_partial_sums]
    gaps = np.abs(np.diff(vals))
    assert np.all(np.diff(gaps) < 0)
    # paired terms 1/(k - 3/4) - 1/(k - 1/4) sum to digamma(3/4) - digamma(1/4) = pi
    assert rep.pv_estimate == pytest.approx(math.pi, abs=1e-13)
    assert abs(vals[-1] - math.pi) < 2 / 60


def test_notail_flagged():
    cfg = PointConfiguration([-1.5, -0.5, 0.5, 1.5], 2.0, NoTail())
    rep = check_assumptions(cfg, [1.0, 2.0])
    assert "principal value defined only on window" in rep.notes
    with pytest.raises(ParameterError):
        epsilon_R(cfg, 1.0, 2)


def test_count_points_boundary():
    cfg = make_lattice_config(200, 0.5)
    assert count_points(cfg, 10) == 20
    assert count_points(cfg, 9.5) == 20
    assert count_points(cfg, 9.49) == 18
    assert count_points(cfg, 250) == 500


def test_count_points_jittered_growth():
    cfg = make_jittered_config(400, 0.3, 0.4, seed=1)
    for R in (50, 100, 200, 400):
        assert 1.8 <= count_points(cfg, R) / R <= 2.2


def test_count_points_notail_beyond_window():
    cfg = PointConfiguration([0.5], 1.0, NoTail())
    with pytest.raises(ParameterError):
        count_points(cfg, 2.0)


def test_epsilon_symmetric_zero(half_lattice):
    for R in (5, 10, 50, 150):
        assert epsilon_R(half_lattice, R, count_points(half_lattice, R)) == 0.0


def test_epsilon_quarter_against_brute_force(quarter_lattice):
    assert abs(epsilon_R(quarter_lattice, 20, 40) - EPS_R_QUARTER_R20_N40) < 1e-8


def test_epsilon_decays(quarter_lattice):
    vals = [abs(epsilon_R(quarter_lattice, R, count_points(quarter_lattice, R)))
            for R in (10, 20, 40, 80)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_roundtrip(tmp_path):
    cfg = make_jittered_config(30, 0.3, 0.4, seed=11)
    path = tmp_path / "cfg.txt"
    write_config(cfg, path)
    back = read_config(path)
    assert np.array_equal(back.points, cfg.points)
    assert back.window_radius == cfg.window_radius and back.tail == cfg.tail


def test_read_rejects_garbage(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("hello\n")
    with pytest.raises(ParameterError):
        read_config(path)


st_S = st.floats(5, 80)
st_seed = st.integers(0, 10 ** 6)


@given(S=st_S, amp=st.floats(0, 1), exp=st.floats(0, 0.99), seed=st_seed)
def test_jittered_invariants(S, amp, exp, seed):
    cfg = make_jittered_config(S, amp, exp, seed)
    p = cfg.points
    assert np.all(np.diff(p) > 0)
    assert cfg.point(-1) < 0 <= cfg.point(0)
    a = cfg.point(p.size + cfg.index_offset)
    assert p[-1] < a and -p[0] < -cfg.point(cfg.index_offset - 1)


@given(S=st_S, shift=st.floats(-0.99, 0.99).filter(lambda s: abs(s) > 1e-6),
       R1=st.floats(0.5, 100), R2=st.floats(0.5, 100))
def test_count_monotone(S, shift, R1, R2):
    cfg = make_lattice_config(S, shift)
    lo, hi = sorted((R1, R2))
    assert count_points(cfg, lo) <= count_points(cfg, hi)


@given(S=st.floats(5, 40), R=st.floats(1, 30), seed=st_seed)
def test_epsilon_window_independent(S, R, seed):
    # the same configuration stored with window S and 2S
    small = make_jittered_config(S, 0.3, 0.4, seed)
    a = small.point(small.points.size + small.index_offset)
    b = -small.point(small.index_offset - 1)
    ext = np.arange(a, 2 * S + 0.5)
    ext = ext[ext <= 2 * S]
    neg = -np.arange(b, 2 * S + 0.5)[::-1]
    neg = neg[neg >= -2 * S]
    big = PointConfiguration(np.concatenate([neg, small.points, ext]), 2 * S, LatticeTail(0.5))
    assert exterior_reciprocal_sum(small, R) == pytest.approx(
        exterior_reciprocal_sum(big, R), abs=1e-12)


@given(S=st.floats(3, 60), seed=st_seed)
def test_symmetric_configs_have_zero_tilt(S, seed):
    base = make_jittered_config(S, 0.4, 0.5, seed)
    pos = base.points[base.points > 0]
    cfg = PointConfiguration(np.concatenate([-pos[::-1], pos]), base.window_radius,
                             LatticeTail(0.5))
    assert cfg.is_symmetric()
    for R in (1.0, S / 2, S, 2 * S):
        assert epsilon_R(cfg, R, max(count_points(cfg, R), 1)) == 0.0
