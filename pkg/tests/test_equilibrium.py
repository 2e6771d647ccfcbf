import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rigidkernel import equilibrium as eq
from rigidkernel.errors import ParameterError
from rigidkernel.orthopoly import gauss_legendre


def P(alpha, frac=0.0):
    return eq.EquilibriumParams(alpha, frac * eq.eps_alpha(alpha))


def test_eps_alpha():
    assert eq.eps_alpha(1.0) == 0.0
    assert eq.eps_alpha(2.0) == pytest.approx(math.sqrt(3), abs=1e-15)


def test_params_reject_large_tilt():
    with pytest.raises(ParameterError):
        eq.EquilibriumParams(1.2, 1.05 * eq.eps_alpha(1.2))
    with pytest.raises(ParameterError):
        eq.EquilibriumParams(0.9, 0.0)
    with pytest.raises(ParameterError):
        eq.EquilibriumParams(1.0, 0.1)


def test_alpha_one_constant_density():
    x = np.linspace(-0.999, 0.999, 7)
    assert np.all(eq.psi_alpha_eps(P(1.0), x) == 0.5)


def test_psi_domain():
    with pytest.raises(ParameterError):
        eq.psi_alpha_eps(P(1.2), 1.0)


@pytest.mark.parametrize("alpha", [1.05, 1.1, 1.5, 3.0])
def test_psi_at_zero_independent_of_eps(alpha):
    vals = [float(eq.psi_alpha_eps(P(alpha, f), 0.0)) for f in (-1, -0.5, 0, 0.5, 1)]
    assert np.allclose(vals, eq.psi_at_zero(alpha), rtol=0, atol=1e-15)


def test_psi_at_zero_matches_balayage_form():
    assert eq.psi_at_zero(1.1) == pytest.approx(float(eq.psi_alpha_0(1.1, 0.0)), abs=1e-15)
    assert eq.psi_at_zero(1.0) == 0.5


def test_psi_at_zero_decreasing():
    vals = [eq.psi_at_zero(a) for a in np.linspace(1, 2, 11)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_endpoint_vanishes_at_critical_tilt():
    p = P(1.3, 1.0)
    vals = [float(eq.psi_alpha_eps(p, 1 - 10.0 ** -k)) for k in range(2, 7)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-2


def test_c_alpha():
    assert eq.c_alpha("+", 1.0) == eq.c_alpha("-", 1.0) == 0.5
    for a in (1.05, 1.1, 1.2):
        assert eq.c_alpha("+", a) <= 0.5 <= eq.c_alpha("-", a)
    assert abs(eq.c_alpha("+", 1.0001) - 0.5) < 1e-3
    assert abs(eq.c_alpha("-", 1.0001) - 0.5) < 1e-3
    with pytest.raises(ParameterError):
        eq.c_alpha("x", 1.1)


def test_arcsine_potential():
    for x in (0.0, 0.5, -0.5):
        assert eq.log_potential(eq.arcsine_density, x) == pytest.approx(math.log(2), abs=1e-10)


def test_nu_potential():
    for x in (0.0, 0.25, 0.5):
        assert abs(eq.log_potential(eq.nu_density, x) - x) < 1e-8
    assert abs(eq.log_potential(eq.nu_density, 0.0)) < 1e-14


def test_uniform_potential_gives_ell_two():
    rep = eq.verify_variational(P(1.0))
    assert abs(rep.ell_estimate - 2.0) < 1e-7


def test_normalization():
    rep = eq.verify_variational(eq.EquilibriumParams(1.3, 0.2), np.array([0.0]))
    assert abs(rep.normalization - 1) < 1e-10


def test_variational_deviation():
    rep = eq.verify_variational(eq.EquilibriumParams(1.2, 0.3))
    assert rep.max_variational_deviation < 1e-6
    assert rep.density_min > 0


def test_ell_independent_of_eps():
    a = eq.verify_variational(P(1.2, 0.0), np.array([0.0, 0.5]))
    b = eq.verify_variational(P(1.2, 0.7), np.array([0.0, 0.5]))
    assert a.ell_estimate == pytest.approx(b.ell_estimate, abs=1e-10)


def test_discrete_oracle():
    assert eq.total_variation_to_oracle(eq.EquilibriumParams(1.2, 0.3)) <= 2e-2
    assert eq.total_variation_to_oracle(P(1.0)) <= 2e-2


def test_xi_at_one():
    assert eq.xi(eq.EquilibriumParams(1.3, 0.2), 1.0) == 0


def test_xi_positive_on_ellipse():
    p = eq.EquilibriumParams(1.3, 0.2)
    m, _ = eq.min_re_xi_on_ellipse(p, 1.05)
    assert m > 0
    assert m >= eq.xi_lower_bound(p, 1.05)


def test_xi_boundary_values_vanish():
    p = eq.EquilibriumParams(1.3, 0.2)
    for x in (-0.6, 0.0, 0.3, 0.8):
        assert abs(eq.xi(p, complex(x, 1e-6)).real) < 1e-4


def test_tau_range():
    p = eq.EquilibriumParams(1.3, 0.2)
    with pytest.raises(ParameterError):
        eq.min_re_xi_on_ellipse(p, float(eq.joukowski_phi(1.3).real) + 0.01)


def test_rho_derivative_matches_finite_difference():
    p = eq.EquilibriumParams(1.3, 0.2)
    for z in (0.3 + 0.1j, 1.02 + 0.01j, -0.7 - 0.2j):
        h = 1e-6
        fd = (eq.rho_alpha_eps(p, z + h) - eq.rho_alpha_eps(p, z - h)) / (2 * h)
        assert abs(eq.rho_derivative(p, z) - fd) < 1e-7


@given(alpha=st.floats(1.0, 4.0), frac=st.floats(-1, 1))
def test_unit_mass(alpha, frac):
    p = P(alpha, frac if alpha > 1 else 0.0)
    mass = eq.total_mass(lambda t: eq.rho_alpha_eps(p, t) / (2 * np.pi), weighted=True)
    assert abs(mass - 1) < 1e-10


@given(alpha=st.floats(1.0, 4.0), frac=st.floats(-1, 1), x=st.floats(-0.999, 0.999))
def test_positive_inside(alpha, frac, x):
    p = P(alpha, frac if alpha > 1 else 0.0)
    assert eq.psi_alpha_eps(p, x) >= 0


@given(alpha=st.floats(1.01, 4.0))
def test_negative_beyond_critical(alpha):
    x = np.cos(gauss_legendre(200, (0, math.pi)).nodes)
    vals = eq.psi_formula(alpha, 1.05 * eq.eps_alpha(alpha), x)
    assert np.min(vals) < 0


@given(alpha=st.floats(1.01, 4.0), frac=st.floats(-1, 1), x=st.floats(-0.99, 0.99))
def test_tilt_decomposition(alpha, frac, x):
    p = P(alpha, frac)
    lhs = eq.psi_alpha_eps(p, x)
    rhs = eq.psi_alpha_0(alpha, x) - p.eps / 2 * eq.nu_density(x)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))
