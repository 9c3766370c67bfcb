import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epd import verify as V
from epd.data import Bump, CauchyData, Gaussian, Polynomial, RadialProfile, SeriesCoefficients, ZERO
from epd.errors import DomainError
from epd.kernels import EPDParameters
from epd.quadrature import QuadratureSpec
from epd.solver import (Grid, Method, solve_classical, solve_classical_modified, solve_grid,
                        solve_radial, solve_radial_modified, solve_radial_series, spherical_mean)

coef = st.floats(-1.0, 1.0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_spherical_mean_of_one_is_sphere_area(n):
    one = RadialProfile(Polynomial((1.0,)))
    area = 2 * math.pi ** (n / 2) / math.gamma(n / 2)
    assert spherical_mean(one, [0.3] * n, 0.7, n) == pytest.approx(area, rel=1e-13)


def test_spherical_mean_of_quadratic_in_3d():
    # |y|^2 averaged over |y - x| = r is |x|^2 + r^2
    sq = RadialProfile(Polynomial((0.0, 0.0, 1.0)))
    x, r = np.array([0.2, -0.1, 0.4]), 0.6
    got = spherical_mean(sq, x, r, 3) / (4 * math.pi)
    assert got == pytest.approx(x @ x + r * r, rel=1e-12)


def test_examples_match_closed_forms_on_grid():
    rep = V.check_examples(tol=1e-8)
    assert rep.passed


@settings(max_examples=25, deadline=None)
@given(a=st.lists(coef, min_size=1, max_size=4), b=st.lists(coef, min_size=1, max_size=4),
       mu=st.floats(0.1, 0.45), nu=st.floats(-0.4, 0.8), s=st.floats(0.1, 0.8))
def test_series_matches_quadrature(a, b, mu, nu, s):
    p = EPDParameters(mu, nu)
    x = 1.2
    t = s * x
    ser = solve_radial_series(p, SeriesCoefficients(tuple(a), tuple(b)), t, x).value
    quad = solve_radial(p, CauchyData(Polynomial(tuple(a)), Polynomial(tuple(b))), t, x).value
    assert quad == pytest.approx(ser, abs=1e-8 * (1 + abs(ser)))


@settings(max_examples=15, deadline=None)
@given(a=st.lists(coef, min_size=1, max_size=5), b=st.lists(coef, min_size=1, max_size=5),
       mu=st.floats(0.1, 0.9), nu=st.floats(-0.5, 1.0), s=st.floats(0.2, 0.8))
def test_series_solves_the_equation(a, b, mu, nu, s):
    p = EPDParameters(mu, nu)
    coeffs = SeriesCoefficients(tuple(a), tuple(b))
    x = 1.0
    res = V.epd_residual(lambda t, y: solve_radial_series(p, coeffs, t, y).value, mu, s * x, x, nu=nu)
    assert res < 1e-6


def test_series_takes_initial_value():
    p = EPDParameters(0.3, 0.2)
    coeffs = SeriesCoefficients((1.0, -0.5, 0.25), (0.7,))
    f = np.polynomial.polynomial.polyval(0.8, coeffs.a)
    t = 1e-9
    # the velocity term enters as 0.7 t^{2 mu}/(2 mu)
    expected = f + 0.7 * t ** 0.6 / 0.6
    assert solve_radial_series(p, coeffs, t, 0.8).value == pytest.approx(expected, rel=1e-9)


def test_series_homogeneity():
    # monomial data x^l gives a solution homogeneous of degree l (plus 2 mu for velocity)
    p = EPDParameters(0.3, 0.2)
    lam, t, x = 1.7, 0.3, 1.0
    f3 = SeriesCoefficients((0.0, 0.0, 0.0, 1.0), (0.0,))
    g2 = SeriesCoefficients((0.0,), (0.0, 0.0, 1.0))
    u = solve_radial_series(p, f3, t, x).value
    assert solve_radial_series(p, f3, lam * t, lam * x).value == pytest.approx(lam ** 3 * u, rel=1e-13)
    v = solve_radial_series(p, g2, t, x).value
    assert solve_radial_series(p, g2, lam * t, lam * x).value == pytest.approx(lam ** 2.6 * v, rel=1e-13)


def test_series_even_data_is_polynomial_in_t_squared():
    p = EPDParameters(0.3, 0.2)
    coeffs = SeriesCoefficients((0.5, 0.0, -0.3, 0.0, 0.2), (0.0,))
    ts = np.array([0.1, 0.2, 0.3, 0.4, 0.5, 0.6])
    u = np.array([solve_radial_series(p, coeffs, t, 1.0).value for t in ts])
    # even degree 4 data: the hypergeometric factors terminate at (t/x)^4
    fit = np.polynomial.polynomial.polyfit(ts ** 2, u, 2)
    assert np.polynomial.polynomial.polyval(ts ** 2, fit) == pytest.approx(u, rel=1e-12)


def test_radial_is_linear():
    p = EPDParameters(0.3, 0.2)
    data = CauchyData(Gaussian(1.0, 1.0, 0.3), Bump(0.8, 0.5))
    base = solve_radial(p, data, 0.7, 1.1).value
    assert solve_radial(p, data.scaled(-2.5), 0.7, 1.1).value == pytest.approx(-2.5 * base, rel=1e-10)
    f_only = solve_radial(p, CauchyData(data.f, ZERO), 0.7, 1.1).value
    g_only = solve_radial(p, CauchyData(ZERO, data.g), 0.7, 1.1).value
    assert f_only + g_only == pytest.approx(base, rel=1e-12)


@pytest.mark.parametrize("solve, p", [
    (solve_radial, EPDParameters(0.3, 0.2)),
    (solve_radial_modified, EPDParameters(0.3, 0.2, q=-0.45)),
])
def test_zero_data_gives_zero(solve, p):
    assert solve(p, CauchyData(), 0.5, 1.0).value == 0.0


def test_classical_zero_data_gives_zero():
    p = EPDParameters(0.3, n=2)
    assert solve_classical(p, CauchyData(), 0.5, [1.0, 0.0]).value == 0.0


def test_classical_n1_near_wave_limit_is_dalembert():
    f, g = Gaussian(1.0, 0.0, 0.5), Gaussian(0.5, 0.2, 0.4)
    p = EPDParameters(0.4999, n=1)
    got = solve_classical(p, CauchyData(f, g), 0.6, 0.3).value
    assert got == pytest.approx(V.dalembert(f, g, 0.6, 0.3), abs=2e-3)


def test_classical_and_radial_agree_inside_the_cone():
    # radial data in the plane is the nu = 0 radial problem; t > |x| reaches the inner cone
    mu = 0.3
    prof = Gaussian(1.0, 0.0, 0.5)
    quad = QuadratureSpec(rel_tol=1e-8)
    for t, x in [(1.2, 0.5), (1.0, 1.3)]:
        c = solve_classical(EPDParameters(mu, n=2), CauchyData(RadialProfile(prof), ZERO), t, [x, 0.0], quad)
        r = solve_radial(EPDParameters(mu, 0.0), CauchyData(prof, ZERO), t, x, quad)
        assert c.value == pytest.approx(r.value, abs=1e-6)


def test_classical_solution_satisfies_equation():
    p = EPDParameters(0.3, n=3)
    data = CauchyData(RadialProfile(Gaussian(1.0, 0.0, 0.6)), RadialProfile(Gaussian(0.5, 0.0, 0.8)))
    U = lambda t, y: solve_classical(p, data, t, y).value  # noqa: E731
    assert V.epd_residual(U, 0.3, 0.8, np.array([0.4, 0.1, -0.2]), n=3) < 1e-4


def test_modified_classical_returns_phase():
    p = EPDParameters(0.3, n=1, q=-0.45)
    s = solve_classical_modified(p, CauchyData(Bump(0.0, 1.0), ZERO), 0.5, 0.2)
    assert math.isfinite(s.value) and s.phase == pytest.approx(np.exp(-0.45j * np.pi))


def test_grid_marks_points_outside_series_domain():
    p = EPDParameters(0.3, 0.2)
    samples = solve_grid("RadialSeries", p, Grid((0.5, 1.5), (1.0,)), coeffs=SeriesCoefficients((1.0,)))
    assert [s.skipped for s in samples] == [False, True]
    assert "t < x" in samples[1].note and math.isnan(samples[1].value)


def test_grid_marks_domain_errors():
    p = EPDParameters(0.7, 0.2)
    samples = solve_grid(Method.RADIAL_QUAD, p, Grid((0.5,), (1.0, 2.0)), data=CauchyData(Bump(1.0, 0.5)))
    assert all(s.skipped and s.note.startswith("skipped") for s in samples)


def test_grid_workers_do_not_change_results():
    p = EPDParameters(0.3, 0.2)
    data = CauchyData(Bump(1.0, 0.5))
    g = Grid((0.2, 0.4), (0.8, 1.0, 1.2))
    one = solve_grid("RadialQuad", p, g, data=data)
    many = solve_grid("RadialQuad", p, g, data=data, workers=3)
    assert [s.value for s in one] == [s.value for s in many]


def test_grid_axes_must_be_monotone():
    with pytest.raises(DomainError):
        Grid((0.1, 0.3, 0.2), (1.0,))
