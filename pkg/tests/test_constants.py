import math

import mpmath as mp
import pytest
from hypothesis import assume, given, strategies as st

from fracckn.constants import (
    ALPHA_MARGIN, C_alpha, Parameters, angular_factor, exponent_p, h_alpha,
    h_alpha_status, kappa, kappa_general, kappa_general_with_error,
    power_multiplier, problem_constants, sphere_area, structural_constants)
from fracckn.errors import DivergentIntegral, ValidationError
from fracckn.validation import brute_force_multiplier

mp.mp.dps = 30


def mp_lambda(n, g, s):
    n, g, s = mp.mpf(n), mp.mpf(g), mp.mpf(s)
    return (2 ** (2 * g) * mp.gamma((s + 2 * g) / 2) * mp.gamma((n - s) / 2)
            * mp.rgamma(s / 2) * mp.rgamma((n - s - 2 * g) / 2))


# -- parameter validation ----------------------------------------------------

@pytest.mark.parametrize("kw,msg", [
    (dict(n=1, gamma=0.5, alpha=0.0, beta=0.0), "n >= 2"),
    (dict(n=2.5, gamma=0.5, alpha=0.0, beta=0.0), "integer"),
    (dict(n=3, gamma=1.0, alpha=0.0, beta=0.0), "gamma must lie"),
    (dict(n=3, gamma=0.0, alpha=0.0, beta=0.0), "gamma must lie"),
    (dict(n=3, gamma=0.5, alpha=-1.0, beta=-1.0), "-2*gamma < alpha"),
    (dict(n=3, gamma=0.5, alpha=-1.0 + 1e-8, beta=-0.99), "kappa diverges"),
    (dict(n=3, gamma=0.5, alpha=1.0, beta=1.0), "alpha < (n-2*gamma)/2"),
    (dict(n=3, gamma=0.5, alpha=0.2, beta=0.1), "alpha <= beta"),
    (dict(n=3, gamma=0.5, alpha=0.2, beta=0.71), "beta <= alpha+gamma"),
    (dict(n=3, gamma=0.5, alpha=float("nan"), beta=0.0), "finite"),
])
def test_parameter_validation(kw, msg):
    with pytest.raises(ValidationError) as ei:
        Parameters(**kw)
    assert msg in str(ei.value)


def test_parameter_margin_is_enforced_just_inside():
    Parameters(3, 0.5, -1.0 + 2 * ALPHA_MARGIN, -0.9)


def test_exponent_p():
    P = Parameters(3, 0.5, 0.0, 0.0)
    assert exponent_p(P) == pytest.approx(3.0)
    assert P.critical_p == pytest.approx(3.0)
    E = Parameters(3, 0.5, 0.1, 0.6)
    assert E.is_hardy_endpoint and E.p == 2.0
    assert Parameters(3, 0.5, -0.5, -0.2).p == pytest.approx(6 / 2.6)


def test_replace_revalidates():
    P = Parameters(3, 0.5, 0.0, 0.0)
    assert P.replace(beta=0.3).beta == 0.3
    with pytest.raises(ValidationError):
        P.replace(beta=0.6)


# -- structural constants -------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3, 4, 7])
def test_sphere_area(n):
    assert sphere_area(n) == pytest.approx(float(2 * mp.pi ** (n / 2) / mp.gamma(n / 2)), rel=1e-15)


@pytest.mark.parametrize("n,g", [(2, 0.25), (3, 0.5), (5, 0.75)])
def test_structural_constants_against_mpmath(n, g):
    sigma, c = structural_constants(n, g)
    ref_sigma = (2 ** (2 * mp.mpf(g)) * g * mp.gamma(mp.mpf(n) / 2 + g)
                 / (mp.pi ** (mp.mpf(n) / 2) * mp.gamma(1 - mp.mpf(g))))
    ref_c = mp_lambda(n, g, (n - 2 * mp.mpf(g)) / 2)
    assert sigma == pytest.approx(float(ref_sigma), rel=1e-13)
    assert c == pytest.approx(float(ref_c), rel=1e-13)


def test_fractional_laplacian_constant_gamma_half_n3():
    # sigma_{3,1/2} = 1/pi^2 for the half Laplacian in three dimensions
    assert structural_constants(3, 0.5)[0] == pytest.approx(1 / math.pi ** 2, rel=1e-14)


# -- angular factor -------------------------------------------------------------

@pytest.mark.parametrize("n,g,rho", [(3, 0.5, 1.5), (3, 0.25, 3.0), (4, 0.75, 1.2), (2, 0.5, 2.0),
                                      (5, 0.3, 1.05)])
def test_angular_factor_against_mpmath(n, g, rho):
    a = (n + 2 * mp.mpf(g)) / 2
    f = lambda s: (1 + rho ** 2 - 2 * rho * s) ** (-a) * (1 - s * s) ** (mp.mpf(n - 3) / 2)
    outer = 2 * mp.pi ** ((n - 1) / mp.mpf(2)) / mp.gamma((n - 1) / mp.mpf(2))
    ref = outer * mp.quad(f, [-1, 1])
    assert angular_factor(n, g, rho) == pytest.approx(float(ref), rel=1e-12)


def test_angular_factor_gauss_jacobi_agrees_away_from_one():
    assert angular_factor(3, 0.5, 3.0, method="gauss-jacobi") == pytest.approx(
        angular_factor(3, 0.5, 3.0), rel=1e-12)


def test_angular_factor_rejects_interior():
    with pytest.raises(ValueError):
        angular_factor(3, 0.5, 0.9)
    with pytest.raises(ValueError):
        angular_factor(3, 0.5, 2.0, method="simpson")


# -- kappa and the power multiplier ---------------------------------------------

@pytest.mark.parametrize("n,g,s", [(3, 0.5, -0.9), (3, 0.5, 0.3), (4, 0.75, 2.1), (2, 0.25, -0.4),
                                    (5, 0.5, 3.9)])
def test_power_multiplier_against_mpmath(n, g, s):
    assert power_multiplier(n, g, s) == pytest.approx(float(mp_lambda(n, g, s)), rel=1e-13)


def test_power_multiplier_zeros_and_domain():
    assert power_multiplier(3, 0.5, 0.0) == 0.0
    assert abs(power_multiplier(3, 0.5, 2.0)) < 1e-15
    for s in (-1.0, 3.0):
        with pytest.raises(DivergentIntegral):
            power_multiplier(3, 0.5, s)


@pytest.mark.parametrize("g,s", [(0.25, 0.7), (0.3, -0.2), (0.1, 1.5)])
def test_power_multiplier_against_brute_force(g, s):
    assert brute_force_multiplier(g, s) == pytest.approx(power_multiplier(3, g, s), rel=1e-6)


@pytest.mark.parametrize("n,g,a,ab", [(3, 0.5, -0.9, 0.9), (3, 0.5, 0.2, 0.7), (4, 0.75, -1.2, 0.5),
                                       (2, 0.25, 0.3, -0.5), (5, 0.5, 1.0, 1.5)])
def test_kappa_quadrature_matches_closed_form(n, g, a, ab):
    sigma, _ = structural_constants(n, g)
    ref = float((mp_lambda(n, g, a + ab) - mp_lambda(n, g, a)) / sigma)
    val, err = kappa_general_with_error(n, g, a, ab, tol=1e-11)
    assert val == pytest.approx(ref, rel=1e-9)
    assert err < 1e-6 * abs(ref)


def test_kappa_zero_weight():
    assert kappa_general(3, 0.5, 0.2, 0.0) == 0.0


@pytest.mark.parametrize("a,ab", [(-1.0, 0.5), (3.0, 0.1), (0.5, 2.6), (0.0, -1.2)])
def test_kappa_divergent(a, ab):
    with pytest.raises(DivergentIntegral):
        kappa_general(3, 0.5, a, ab)


def test_C_alpha_golden_value():
    assert C_alpha(Parameters(3, 0.5, -0.9, -0.89)) == pytest.approx(11.996127877882566, rel=1e-9)


@given(st.floats(-0.95, 0.95))
def test_C_alpha_is_minus_lambda(alpha):
    P = Parameters(3, 0.5, alpha, alpha)
    assert C_alpha(P) == pytest.approx(-power_multiplier(3, 0.5, alpha), rel=1e-8, abs=1e-10)


def test_C_alpha_vanishes_at_zero():
    assert abs(C_alpha(Parameters(3, 0.5, 0.0, 0.0))) < 1e-9


@given(st.floats(-0.4, 1.0), st.floats(-0.3, 0.8), st.floats(-0.3, 0.8))
def test_kappa_additive_in_weight(a, x, y):
    # kappa^{x+y}_a = kappa^x_a + kappa^y_{a+x}
    n, g = 3, 0.25
    assume(min(a + x, a + x + y) > -2 * g + 0.05)
    lhs = kappa_general(n, g, a, x + y, tol=1e-11)
    rhs = kappa_general(n, g, a, x, tol=1e-11) + kappa_general(n, g, a + x, y, tol=1e-11)
    assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-9)


def test_problem_constants_consistent():
    P = Parameters(3, 0.5, -0.5, -0.2)
    pc = problem_constants(P)
    assert pc.C_alpha == pytest.approx(C_alpha(P), rel=1e-12)
    assert pc.kappa == pytest.approx(kappa(P), rel=1e-12)
    assert pc.kappa_gamma == pytest.approx(pc.C_alpha + pc.c_ng, rel=1e-12)


def test_h_alpha_definition_and_status():
    P = Parameters(3, 0.5, -0.9, -0.89)
    C = C_alpha(P)
    M = 2.0
    h = (4 * 0.5 * C - M * 2.0) / (4 * C + 2 * M) + P.alpha
    assert h_alpha(P, M) == pytest.approx(h, rel=1e-12)
    assert h_alpha_status(P, M) in {"below", "inside", "above"}
    with pytest.raises(ValidationError):
        h_alpha(P, 0.0)
