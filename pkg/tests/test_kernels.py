import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from epd import kernels as K
from epd import verify as V
from epd.errors import DomainError, LightConeError
from epd.kernels import EPDParameters, Region

pos = st.floats(0.05, 3.0)


# -- regions ---------------------------------------------------------------

def test_classify_examples():
    g = K.classify_region(0.5, 1.0, 1.0)
    assert g.region is Region.SHELL and g.z == pytest.approx(0.875, rel=1e-15)
    assert K.classify_region(2.0, 0.5, 0.3).region is Region.INNER_CONE
    assert K.classify_region(0.5, 1.0, 2.0).region is Region.OUTSIDE_CONE


@given(t=pos, x=pos, xp=pos)
def test_region_partition(t, x, xp):
    g = K.classify_region(t, x, xp)
    assume(not g.boundary_adjacent)
    shell = abs(x - t) < xp < x + t
    inner = xp < t - x
    outside = xp < x - t or xp > x + t
    assert shell + inner + outside == 1
    expected = Region.SHELL if shell else Region.INNER_CONE if inner else Region.OUTSIDE_CONE
    assert g.region is expected
    assert (g.z > 1) == outside and (abs(g.z) < 1) == shell and (g.z < -1) == inner


def test_classify_needs_positive_t():
    with pytest.raises(DomainError):
        K.classify_region(0.0, 1.0, 1.0)


# -- W ---------------------------------------------------------------------

def test_w_kernel_value_on_diagonal():
    # Gamma(1.25) / (sqrt(pi) Gamma(0.75)) from mpmath
    kv = K.w_kernel(EPDParameters(0.25, n=1), 1.0, 0.4, 0.4)
    assert kv.value == pytest.approx(0.41731342083703659314, rel=1e-14)


def test_w_kernel_outside_is_zero():
    kv = K.w_kernel(EPDParameters(0.25, n=2), 1.0, [0.0, 0.0], [1.5, 0.2])
    assert kv.value == 0.0 and kv.region is Region.OUTSIDE_CONE


def test_w_kernel_on_cone_raises():
    with pytest.raises(LightConeError):
        K.w_kernel(EPDParameters(0.25, n=1), 1.0, 0.0, 1.0)


@given(n=st.sampled_from([1, 2, 3]), mu=st.floats(0.05, 0.45), t=st.floats(0.5, 2.0),
       frac=st.floats(0.0, 0.9))
def test_w_derivative_form_matches_closed_form(n, mu, t, frac):
    p = EPDParameters(mu, n=n)
    d = frac * t
    assert K.w_derivative_form(p, t, d) == pytest.approx(float(K.w_profile(n, mu, t, d)), rel=1e-12)


# -- N ---------------------------------------------------------------------

@pytest.mark.parametrize("lam", [0.5, 2.0])
@pytest.mark.parametrize("d", [0.5, 1.6])
def test_n_kernel_homogeneity(lam, d):
    n, mu, q = 2, 0.3, -0.8
    t = 1.0
    base = K.n_profile(n, mu, q, t, d)[0]
    scaled = K.n_profile(n, mu, q, lam * t, lam * d)[0]
    assert scaled == pytest.approx(lam ** (-2 * q - n) * base, rel=1e-12)


def test_n_kernel_against_bessel_integral():
    # n=1, mu=0.3, q=-0.45, t=2, |x-x'|=1
    p = EPDParameters(0.3, n=1, q=-0.45)
    kv = K.n_kernel(p, 2.0, 0.0, 1.0)
    ref = V.n_kernel_bessel(1, 0.3, -0.45, 2.0, 1.0)
    assert kv.profile == pytest.approx(ref, abs=1e-6)
    assert kv.phase == pytest.approx(cmath.exp(-0.45j * math.pi))


def test_n_kernel_q_range():
    with pytest.raises(DomainError):
        K.n_kernel(EPDParameters(0.3, n=1, q=-0.2), 2.0, 0.0, 1.0)


def test_n_branch_limits_logged():
    lim = K.n_branch_limits(EPDParameters(0.3, n=1, q=-0.45), 1.0)
    assert set(lim) == {"outside", "inside", "ratio"}
    assert math.isfinite(lim["ratio"])


# -- K ---------------------------------------------------------------------

def test_k_outside_is_zero():
    kv = K.k_kernel(EPDParameters(0.3, 0.4), 0.5, 2.0, 0.5)
    assert kv.value == 0.0 and kv.region is Region.OUTSIDE_CONE


def test_k_shell_power_law_at_outer_cone():
    mu, nu, x, xp = 0.3, 0.4, 1.0, 1.3
    eps = 2.0 ** -np.arange(12, 20)
    z = 1.0 - eps
    t = np.sqrt(x * x + xp * xp - 2 * x * xp * z)
    vals = np.array([K.k_kernel(EPDParameters(mu, nu), ti, x, xp).value for ti in t])
    slopes = np.diff(np.log(vals)) / np.diff(np.log(eps))
    assert slopes[-1] == pytest.approx(mu - 0.5, abs=1e-4)


@given(m=st.sampled_from([-0.3, 0.3]), nu=st.floats(-0.4, 2.0), t=st.floats(0.2, 2.0),
       x=st.floats(0.2, 2.0), s=st.floats(0.02, 0.98))
def test_k_factored_shell_matches_profile(m, nu, t, x, s):
    lo, hi = abs(x - t), x + t
    xp = lo + s * (hi - lo)
    e = m - 0.5
    fact = K.k_shell_factored(m, nu, t, x, xp) * (xp - lo) ** e * (hi - xp) ** e
    assert float(fact) == pytest.approx(float(K.k_profile(m, nu, t, x, xp)[0]), rel=1e-9)


@given(m=st.sampled_from([-0.3, 0.3]), nu=st.floats(-0.4, 2.0), x=st.floats(0.2, 1.0),
       gap=st.floats(0.2, 1.5), s=st.floats(0.02, 0.98))
def test_k_factored_inner_matches_profile(m, nu, x, gap, s):
    t = x + gap
    xp = s * (t - x)
    fact = K.k_inner_factored(m, nu, t, x, xp) * (t - x - xp) ** (m - 0.5)
    assert float(fact) == pytest.approx(float(K.k_profile(m, nu, t, x, xp)[0]), rel=1e-9)


def _no_sign_jumps(v):
    # genuine zeros are fine; a flip between large values would mean a branch error
    v = np.asarray(v)
    flips = np.nonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)[0]
    scale = np.max(np.abs(v))
    return all(max(abs(v[i]), abs(v[i + 1])) < 0.05 * scale for i in flips)


@settings(max_examples=100)
@given(mu=st.floats(0.05, 0.45), nu=st.floats(-0.45, 2.0), x=st.floats(0.2, 2.0),
       t=st.floats(0.1, 2.5))
def test_k_finite_and_sign_stable_per_region(mu, nu, x, t):
    s = np.linspace(0.05, 0.95, 401)
    for m in (mu, -mu):
        lo, hi = abs(x - t), x + t
        shell = K.k_profile(m, nu, t, x, lo + (hi - lo) * s)
        assert np.all(np.isfinite(shell)) and _no_sign_jumps(shell)
        if t - x > 0.05:
            inner = K.k_profile(m, nu, t, x, (t - x) * s)
            assert np.all(np.isfinite(inner)) and _no_sign_jumps(inner)


@given(mu=st.floats(0.05, 0.45), nu=st.floats(-0.45, 0.45), x=st.floats(0.2, 2.0),
       t=st.floats(0.1, 2.5))
def test_k_shell_one_signed_for_small_nu(mu, nu, x, t):
    lo, hi = abs(x - t), x + t
    shell = K.k_profile(mu, nu, t, x, lo + (hi - lo) * np.linspace(0.02, 0.98, 41))
    assert np.all(shell > 0) or np.all(shell < 0)


def test_k_parameter_checks():
    with pytest.raises(DomainError):
        K.k_kernel(EPDParameters(0.6, 0.4), 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        K.k_kernel(EPDParameters(0.3, -0.6), 1.0, 1.0, 1.0)


# -- H ---------------------------------------------------------------------

def test_h_kernel_series_value():
    # x^{2 nu} x'^{-2(q+1)} F4(0.55, 0.75; 1.3, 1.2; 0.01, 0.01), F4 by mpmath double sum
    p = EPDParameters(0.3, 0.2, q=-0.45)
    kv = K.h_kernel(p, 0.1, 0.1, 1.0)
    assert kv.profile == pytest.approx(0.40078435989246237195, rel=1e-10)
    assert kv.phase == pytest.approx(cmath.exp(-0.45j * math.pi))


def test_h_series_and_integral_agree_near_cone():
    p = EPDParameters(0.3, 0.2, q=-0.45)
    t, x = 0.4, 0.5
    xp = x + t + 0.05
    s = K.h_kernel(p, t, x, xp, method="series").profile
    i = K.h_kernel(p, t, x, xp, method="integral").profile
    assert s == pytest.approx(i, rel=1e-5)


def test_h_small_x_exponent():
    p = EPDParameters(0.3, 0.7, q=-0.45)
    xs = np.array([1e-3, 2e-3, 4e-3])
    vals = np.array([K.h_kernel(p, 0.2, x, 1.5).profile for x in xs])
    slope = np.polyfit(np.log(xs), np.log(vals), 1)[0]
    assert slope == pytest.approx(2 * 0.7, abs=1e-4)


def test_h_on_cone_raises():
    with pytest.raises(LightConeError):
        K.h_kernel(EPDParameters(0.3, 0.2, q=-0.45), 0.4, 0.5, 0.9)
