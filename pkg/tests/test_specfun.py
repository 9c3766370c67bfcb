import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from epd import specfun as S
from epd.errors import DomainError, NoConvergence, PoleError

TIGHT = S.SeriesControl(tol=1e-15)


# -- gamma family ---------------------------------------------------------

def test_gamma_values():
    assert S.gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert S.gamma_fn(5) == pytest.approx(24.0, rel=1e-15)
    # mpmath: gamma(-0.5)
    assert S.gamma_fn(-0.5) == pytest.approx(-3.5449077018110320546, rel=1e-14)


def test_gamma_pole():
    with pytest.raises(PoleError):
        S.gamma_fn(-2.0)
    assert S.rgamma(-3.0) == 0.0


@given(st.floats(0.01, 0.99))
def test_gamma_reflection(x):
    assert S.gamma_fn(x) * S.gamma_fn(1 - x) == pytest.approx(math.pi / math.sin(math.pi * x), rel=1e-13)


@given(st.floats(-4.9, 6.0).filter(lambda v: abs(v - round(v)) > 1e-3))
def test_lgamma_sign_consistent(x):
    lg, sg = S.lgamma_sign(x)
    assert sg * math.exp(lg) == pytest.approx(S.gamma_fn(x), rel=1e-12)


def test_beta_values():
    assert S.beta_fn(1, 1) == pytest.approx(1.0, rel=1e-15)
    # pi / sin(pi/4)
    assert S.beta_fn(0.25, 0.75) == pytest.approx(4.4428829381583662470, rel=1e-14)
    # mpmath quad of 2 int_0^1 (1-s^2)^(-3/4) ds after s = 1 - v^4
    assert S.beta_fn(0.25, 0.5) == pytest.approx(5.2441151085842396209, rel=1e-13)


def test_pochhammer_values():
    assert S.pochhammer(3, 4) == 360
    assert S.pochhammer(1.7, 0) == 1
    assert S.pochhammer(-2, 4) == 0


# -- 2F1 -------------------------------------------------------------------

def test_2f1_values():
    assert S.gauss_2f1(-0.5, 1.5, 1.5, 0.36, TIGHT).value == pytest.approx(0.8, abs=1e-15)
    # arcsin(1/2)/(1/2)
    assert S.gauss_2f1(0.5, 0.5, 1.5, 0.25).value == pytest.approx(1.0471975511965977462, rel=1e-12)
    assert S.gauss_2f1(0.3, 0.7, 1.1, 0.0).value == 1.0


@given(m=st.integers(0, 8), b=st.floats(-3, 3), c=st.floats(0.2, 4), z=st.floats(-0.95, 0.95))
def test_2f1_terminating_matches_polynomial(m, b, c, z):
    direct = sum(S.pochhammer(-m, k) * S.pochhammer(b, k) / (S.pochhammer(c, k) * math.factorial(k))
                 * z ** k for k in range(m + 1))
    got = S.gauss_2f1(-m, b, c, z).value
    scale = sum(abs(S.pochhammer(-m, k) * S.pochhammer(b, k) / (S.pochhammer(c, k) * math.factorial(k))
                    * z ** k) for k in range(m + 1))
    assert abs(got - direct) <= 1e-13 * max(1.0, scale)


@given(a=st.floats(-2, 2), b=st.floats(0.1, 3), z=st.floats(-0.9, 0.85))
def test_2f1_binomial_reduction(a, b, z):
    assert S.gauss_2f1(a, b, b, z).value == pytest.approx((1 - z) ** (-a), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(a=st.floats(-1.5, 1.5), b=st.floats(-1.5, 1.5), c=st.floats(0.3, 3.0),
       z=st.floats(-6.0, 0.98))
def test_2f1_against_mpmath(a, b, c, z):
    s = c - a - b
    if z > 0.9 and abs(s - round(s)) < 1e-3:
        return
    ref = float(mpmath.hyp2f1(a, b, c, z))
    assert S.gauss_2f1(a, b, c, z).value == pytest.approx(ref, rel=1e-9, abs=1e-12)


def test_2f1_integer_c_minus_a_minus_b_near_one():
    # c - a - b = 1 takes the perturbed-c path
    ref = float(mpmath.hyp2f1(0.5, 0.5, 2.0, 0.97))
    assert S.gauss_2f1(0.5, 0.5, 2.0, 0.97).value == pytest.approx(ref, rel=1e-9)


def test_2f1_gauss_sum_at_one():
    a, b, c = 0.2, 0.3, 1.4
    ref = math.gamma(c) * math.gamma(c - a - b) / (math.gamma(c - a) * math.gamma(c - b))
    assert S.gauss_2f1(a, b, c, 1.0).value == pytest.approx(ref, rel=1e-14)


def test_2f1_errors():
    with pytest.raises(PoleError):
        S.gauss_2f1(0.5, 0.5, -1.0, 0.3)
    with pytest.raises(DomainError):
        S.gauss_2f1(0.5, 0.5, 1.5, 1.2)
    with pytest.raises(DomainError):
        S.gauss_2f1(0.5, 0.5, 0.8, 1.0)
    with pytest.raises(NoConvergence):
        S.gauss_2f1(0.5, 0.5, 1.5, 0.89, S.SeriesControl(max_terms=3))


def test_hyp2f1_vectorized():
    z = np.linspace(-2, 0.99, 9)
    v = S.hyp2f1(0.3, 0.6, 1.7, z)
    assert v.shape == z.shape
    for zi, vi in zip(z, v):
        assert vi == pytest.approx(S.gauss_2f1(0.3, 0.6, 1.7, zi).value, rel=1e-14)


# -- Appell F4 -------------------------------------------------------------

def test_f4_values():
    # 120 x 120 double sum in mpmath
    got = S.appell_f4(0.5, 1.0, 1.5, 1.25, 0.04, 0.09, TIGHT).value
    assert got == pytest.approx(1.0556089691212787079, abs=1e-12)
    assert S.appell_f4(0.3, 0.2, 1.1, 1.4, 0.0, 0.0).value == 1.0


@given(a=st.floats(-1, 1), b=st.floats(-1, 1), c=st.floats(0.5, 2), d=st.floats(0.5, 2),
       x=st.floats(0, 0.8))
def test_f4_y0_is_2f1(a, b, c, d, x):
    assert S.appell_f4(a, b, c, d, x, 0.0).value == pytest.approx(S.gauss_2f1(a, b, c, x).value,
                                                                  rel=1e-12, abs=1e-13)


@given(a=st.floats(-1, 1), b=st.floats(-1, 1), c=st.floats(0.5, 2), d=st.floats(0.5, 2),
       x=st.floats(0, 0.2), y=st.floats(0, 0.2))
def test_f4_swap_symmetry(a, b, c, d, x, y):
    one = S.appell_f4(a, b, c, d, x, y).value
    two = S.appell_f4(a, b, d, c, y, x).value
    assert one == pytest.approx(two, rel=1e-12, abs=1e-13)


def test_f4_outside_region():
    with pytest.raises(DomainError):
        S.appell_f4(0.5, 0.5, 1.0, 1.0, 0.5, 0.5)
    with pytest.raises(PoleError):
        S.appell_f4(0.5, 0.5, -1.0, 1.0, 0.1, 0.1)


# -- Bessel ----------------------------------------------------------------

def test_bessel_values():
    assert S.bessel_j(0, 0.0) == 1.0
    assert S.bessel_j(1, 0.0) == 0.0
    assert S.bessel_j(0.5, math.pi / 2) == pytest.approx(2 / math.pi, rel=1e-14)
    assert S.bessel_y(0.5, math.pi) == pytest.approx(math.sqrt(2) / math.pi, rel=1e-14)
    assert abs(S.bessel_y(0.5, math.pi / 2)) <= 1e-12


def test_bessel_y_small_argument_power_law():
    z = np.array([1e-6, 1e-7])
    y = S.bessel_y(0.25, z)
    assert np.all(y < 0) and abs(y[0]) > 1.0
    slope = math.log(y[1] / y[0]) / math.log(z[1] / z[0])
    # next correction is relative z^(2 mu) ~ 1e-3
    assert slope == pytest.approx(-0.25, abs=1e-3)


@settings(max_examples=60)
@given(order=st.floats(-0.49, 4.0, allow_subnormal=False), z=st.floats(1e-3, 80.0))
def test_bessel_j_against_scipy(order, z):
    assert S.bessel_j(order, z) == pytest.approx(special.jv(order, z), abs=1e-12, rel=1e-10)


@settings(max_examples=60)
# scipy.special.yv returns 0 for subnormal orders
@given(order=st.floats(0.0, 3.0, allow_subnormal=False), z=st.floats(0.05, 80.0))
def test_bessel_y_against_scipy(order, z):
    ref = special.yv(order, z)
    assert S.bessel_y(order, z) == pytest.approx(ref, abs=1e-10, rel=1e-8)


@given(z=st.floats(0.01, 200.0))
def test_half_order_modulus(z):
    j, y = S.bessel_j(0.5, z), S.bessel_y(0.5, z)
    assert j * j + y * y == pytest.approx(2 / (math.pi * z), rel=1e-12)


@pytest.mark.parametrize("order", [0.0, 0.25, 0.5, 0.75])
@pytest.mark.parametrize("Z", [30.0, 60.0, 120.0])
def test_bessel_leading_asymptotics(order, Z):
    chi = Z - 0.5 * order * math.pi - 0.25 * math.pi
    amp = math.sqrt(2 / (math.pi * Z))
    assert abs(S.bessel_j(order, Z) - amp * math.cos(chi)) <= 0.2 * Z ** -1.5
    assert abs(S.bessel_y(order, Z) - amp * math.sin(chi)) <= 0.2 * Z ** -1.5


@pytest.mark.parametrize("order", [1.0, 2.5])
def test_bessel_asymptotic_correction_scale(order):
    # first correction is |4 order^2 - 1| / (8Z) relative to the amplitude
    Z = 120.0
    chi = Z - 0.5 * order * math.pi - 0.25 * math.pi
    amp = math.sqrt(2 / (math.pi * Z))
    bound = abs(4 * order ** 2 - 1) / (8 * Z) * amp * 1.05
    assert abs(S.bessel_j(order, Z) - amp * math.cos(chi)) <= bound


def test_bessel_domain():
    with pytest.raises(DomainError):
        S.bessel_j(0.5, -1.0)
    with pytest.raises(DomainError):
        S.bessel_y(0.5, 0.0)


# -- Legendre --------------------------------------------------------------

def test_legendre_values():
    assert S.legendre_p(0, 1, 0.5) == pytest.approx(0.5, rel=1e-14)
    assert S.legendre_p(0, 0, 0.3) == pytest.approx(1.0, rel=1e-15)
    assert S.legendre_p(0, 2, 0.3) == pytest.approx(-0.365, rel=1e-14)
    # (1/2) ln 3 and 2 Q_0(2) - 1
    assert S.legendre_q(0, 0, 2.0).real == pytest.approx(0.54930614433405484570, rel=1e-14)
    assert S.legendre_q(0, 1, 2.0).real == pytest.approx(0.098612288668109691395, rel=1e-13)


@given(nu=st.floats(0.0, 2.0), z=st.floats(1.2, 3.0))
def test_legendre_q_half_order_phase(nu, z):
    q = S.legendre_q(0.5, nu, z)
    assert abs(q.real) <= 1e-15 * abs(q)


@settings(max_examples=30)
@given(mu=st.floats(-0.45, 0.45), nu=st.floats(0.0, 2.0), z=st.floats(-0.9, 0.9))
def test_legendre_p_against_mpmath(mu, nu, z):
    ref = complex(mpmath.legenp(nu, mu, z, type=2))
    assert complex(S.legendre_p(mu, nu, z)) == pytest.approx(ref, rel=1e-10, abs=1e-12)


@settings(max_examples=30)
@given(mu=st.floats(-0.45, 0.45), nu=st.floats(0.0, 2.0), z=st.floats(1.2, 4.0))
def test_legendre_q_against_mpmath(mu, nu, z):
    ref = complex(mpmath.legenq(nu, mu, z, type=3))
    assert S.legendre_q(mu, nu, z) == pytest.approx(ref, rel=1e-10, abs=1e-12)
