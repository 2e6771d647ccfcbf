import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rigidkernel.errors import ParameterError
from rigidkernel.orthopoly import cd_kernel, stieltjes_recurrence
from rigidkernel.pointconf import (LatticeTail, PointConfiguration, count_points, epsilon_R,
                                   make_jittered_config, make_lattice_config)
from rigidkernel.weights import (WR, ComparisonMinus, ComparisonPlus, ExpField, RhoR,
                                 V_series, check_lemma21, check_prop1, eval_comparison,
                                 eval_V, eval_w_R, log_rho_R, sweep_prop1)

# Richardson-extrapolated brute-force product over |p_n| > 10 truncated at
# 1e6 and 2e6 for the half-integer lattice; see scripts/oracles.py.
LOG_RHO_HALF_R10_T5 = -5.226956039853604


def test_V_values():
    assert eval_V(0.0) == 0.0
    assert eval_V(1.0) == pytest.approx(2 * math.log(2), abs=1e-15)
    assert eval_V(-1.0) == pytest.approx(2 * math.log(2), abs=1e-15)
    assert abs(eval_V(0.5) - V_series(0.5)) < 1e-14


@pytest.mark.parametrize("t", [1e-8, 0.05, 0.0999, 0.1, 0.1001, 0.3, 0.7])
def test_V_series_branch_agrees(t):
    assert eval_V(t) == pytest.approx(V_series(t), rel=2e-15)
    assert eval_V(-t) == eval_V(t)


def test_V_domain():
    with pytest.raises(ParameterError):
        eval_V(1.5)


def test_log_rho_at_zero(half_lattice):
    assert log_rho_R(half_lattice, 10, 0.0) == 0.0
    assert eval_w_R(half_lattice, 10, 0.0) == 1.0


def test_log_rho_brute_force(half_lattice):
    assert abs(log_rho_R(half_lattice, 10, 5.0) - LOG_RHO_HALF_R10_T5) < 1e-10


def test_log_rho_window_matches_tail():
    # same lattice, stored with different windows; the log-gamma tail at
    # a ~ 300 carries absolute rounding of order eps * lgamma(300) ~ 4e-13
    a = make_lattice_config(12, 0.5)
    b = make_lattice_config(300, 0.5)
    t = np.linspace(-10, 10, 41)
    assert np.allclose(log_rho_R(a, 10, t), log_rho_R(b, 10, t), atol=4e-12, rtol=0)


def test_log_rho_domain(half_lattice):
    with pytest.raises(ParameterError):
        log_rho_R(half_lattice, 10, 10.5)


def test_w_R_positive(quarter_lattice):
    t = np.linspace(-0.999, 0.999, 201)
    assert np.all(eval_w_R(quarter_lattice, 20, t) > 0)


def test_comparison_at_zero():
    assert eval_comparison("+", 1.2, 0.3, 20, 0.0) == 1.0
    assert eval_comparison("-", 1.2, 0.3, 20, 0.0) == 1.0


def test_comparison_support():
    assert eval_comparison("-", 1.2, 0.0, 20, 0.9) == 0.0
    assert eval_comparison("+", 1.2, 0.0, 20, 1.0) == np.inf
    with pytest.raises(ParameterError):
        eval_comparison("+", 1.2, 0.0, 20, 1.1)
    with pytest.raises(ParameterError):
        eval_comparison("*", 1.2, 0.0, 20, 0.0)
    assert ComparisonMinus(1.2, 0.0, 20).support == pytest.approx((-1 / 1.44, 1 / 1.44))


def test_comparison_even_when_untilted():
    t = np.linspace(0, 0.69, 26)
    for s in "+-":
        assert np.array_equal(eval_comparison(s, 1.2, 0.0, 20, t),
                              eval_comparison(s, 1.2, 0.0, 20, -t))


def test_minus_below_plus():
    beta = 1.2 ** -2
    t = np.linspace(-beta, beta, 101)
    assert np.all(eval_comparison("-", 1.2, 0.0, 20, t) <= eval_comparison("+", 1.2, 0.0, 20, t))


def test_lemma21_at_zero():
    rep = check_lemma21(5, [0.0])
    assert rep.lower_margin[0] == 0.0 and rep.upper_margin[0] == 0.0


def test_lemma21_strict_at_half():
    rep = check_lemma21(5, [0.5])
    assert rep.lower_margin[0] > 0 and rep.upper_margin[0] > 0


def test_lemma21_margin_quadratic():
    t = np.array([1e-3, 2e-3, 4e-3])
    rep = check_lemma21(10, t)
    for m in (rep.lower_margin, rep.upper_margin):
        ratio = m / t ** 2
        assert np.allclose(ratio, ratio[0], rtol=1e-3)


def test_lemma21_needs_integer():
    with pytest.raises(ParameterError):
        check_lemma21(2.5, [0.1])


def test_prop1_equality_and_derivative(half_lattice):
    t = np.array([0.0, 1e-3, 2e-3, 4e-3])
    N = count_points(half_lattice, 40)
    rep = check_prop1(half_lattice, 40, N, 1.1, 0.8, t)
    assert rep.extra["equality_at_zero"] == 0.0
    for m in (rep.lower_margin[1:], rep.upper_margin[1:]):
        ratio = m / t[1:] ** 2
        assert np.allclose(ratio, ratio[0], rtol=1e-2)


def test_prop1_quarter_lattice_equality(quarter_lattice):
    t = np.linspace(-1, 1, 201)
    N = count_points(quarter_lattice, 40)
    rep = check_prop1(quarter_lattice, 40, N, 1.1, 0.8, t)
    assert rep.extra["equality_at_zero"] < 1e-12
    assert rep.extra["eps_R"] != 0.0


def test_prop1_rejects_bad_beta(half_lattice):
    with pytest.raises(ParameterError):
        check_prop1(half_lattice, 10, 20, 1.5, 0.8, [0.0])
    with pytest.raises(ParameterError):
        check_prop1(half_lattice, 10, 20, 1.1, 1.0, [0.0])


def test_prop1_sweep_jittered():
    cfg = make_jittered_config(200, 0.3, 0.4, seed=5)
    R_star, reps = sweep_prop1(cfg, 1.1, 0.8, [20, 40, 80, 160], np.linspace(-1, 1, 201))
    assert R_star is not None and R_star <= 160


def test_sandwich_after_threshold(half_lattice):
    alpha = 1.1
    t = np.linspace(-1, 1, 201)
    for R in (20, 40, 80, 160):
        N = count_points(half_lattice, R)
        eps = epsilon_R(half_lattice, R, N)
        wR = eval_w_R(half_lattice, R, t)
        assert np.all(ComparisonMinus(alpha, eps, N)(t) <= wR)
        assert np.all(wR[1:-1] <= ComparisonPlus(alpha, eps, N)(t)[1:-1])


@pytest.mark.parametrize("sign", "+-")
def test_pointwise_limit(half_lattice, sign):
    cls = ComparisonPlus if sign == "+" else ComparisonMinus
    x = np.linspace(-2, 2, 9)
    errs = []
    for R in (20, 40, 80, 160):
        N = count_points(half_lattice, R)
        w = cls(1.1, epsilon_R(half_lattice, R, N), N)
        errs.append(np.max(np.abs(w(x / R) - 1)))
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_scaling_identity(half_lattice):
    R, N = 6.0, 10
    rho = stieltjes_recurrence(RhoR(half_lattice, R), N, 256)
    wr = stieltjes_recurrence(WR(half_lattice, R), N, 256)
    x, y = np.array([0.3, -1.2, 2.0]), np.array([0.1, 0.4, -2.5])
    lhs = cd_kernel(rho, N, x, y, with_weight=True)
    rhs = cd_kernel(wr, N, x / R, y / R, with_weight=True) / R
    assert np.allclose(lhs, rhs, rtol=1e-10, atol=0)


@given(R=st.integers(1, 200), t=st.floats(-1, 1))
def test_lemma21_property(R, t):
    assert check_lemma21(R, [t]).holds


@given(S=st.floats(5, 60), R=st.floats(1, 40), t=st.floats(0, 1), seed=st.integers(0, 999))
def test_symmetric_weights_even(S, R, t, seed):
    base = make_jittered_config(S, 0.4, 0.5, seed)
    pos = base.points[base.points > 0]
    cfg = PointConfiguration(np.concatenate([-pos[::-1], pos]), base.window_radius,
                             LatticeTail(0.5))
    a = log_rho_R(cfg, R, R * t)
    b = log_rho_R(cfg, R, -R * t)
    assert a == pytest.approx(b, rel=1e-13, abs=1e-13)


@given(N=st.integers(1, 400), alpha=st.floats(1.01, 3), eps=st.floats(-1, 1),
       jac=st.sampled_from([-0.5, 0.5]))
def test_no_overflow_log_domain(N, alpha, eps, jac):
    t = np.linspace(-0.999, 0.999, 51)
    for w in (ComparisonPlus(alpha, eps, N), ExpField(alpha, eps, N, jac)):
        assert np.all(np.isfinite(w.log_weight(t)))
    wm = ComparisonMinus(alpha, eps, N)
    assert np.all(np.isfinite(wm.log_weight(t * wm.beta)))
