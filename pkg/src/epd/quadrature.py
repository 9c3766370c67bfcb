"""Quadrature rules for the algebraic-weight and oscillatory integrals.

Three families live here:

* Gauss-Jacobi rules for integrals with known endpoint powers
  (x - lo)^b (hi - x)^a, with a QUADPACK (QAWS) fallback for data that are
  not smooth enough for a fixed-order rule;
* a self-contained tanh-sinh rule, used as an independent integrator by
  the oracles;
* ``bessel_power_integral`` for int r^p prod J_k(a_k r) dr over [lower, inf).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import mpmath
import numpy as np
from scipy import integrate
from scipy.special import roots_jacobi, roots_legendre

from .errors import NoConvergence, QuadratureFailure
from .specfun import bessel_j, bessel_j_scaled, hankel_coefficients


@dataclass(frozen=True)
class QuadratureSpec:
    """User-facing quadrature settings.

    ``scheme`` selects the rule for unweighted integrals; integrals with a
    known algebraic endpoint weight always go through Gauss-Jacobi first.
    """

    scheme: str = "GaussKronrod"
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 200
    oscillatory_partitioning: bool = True

    def __post_init__(self):
        if self.scheme not in ("TanhSinh", "GaussKronrod"):
            raise ValueError(f"unknown quadrature scheme {self.scheme!r}")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")


@lru_cache(maxsize=256)
def jacobi_rule(n: int, alpha: float, beta: float):
    """Nodes/weights on [-1, 1] for weight (1-x)^alpha (1+x)^beta."""
    x, w = roots_jacobi(n, alpha, beta)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=32)
def legendre_rule(n: int):
    x, w = roots_legendre(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_jacobi(func: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
                 e_lo: float, e_hi: float, n: int) -> float:
    """int_lo^hi func(x) (x-lo)^e_lo (hi-x)^e_hi dx with an n-point rule.

    ``func`` is called once with the whole node array.
    """
    x, w = jacobi_rule(n, float(e_hi), float(e_lo))
    half = 0.5 * (hi - lo)
    nodes = lo + half * (x + 1.0)
    return float(np.dot(w, func(nodes))) * half ** (1.0 + e_lo + e_hi)


def weighted_integral(func, lo, hi, e_lo, e_hi, rel_tol=1e-10, abs_tol=1e-13,
                      n0=24, n_max=384, breakpoints: Sequence[float] = ()):
    """Adaptive-order Gauss-Jacobi with a QAWS fallback.

    Returns (value, error_estimate).  The order is doubled until two
    successive estimates agree; if ``n_max`` is reached the integral is
    recomputed with QUADPACK's algebraic-weight routine.
    """
    prev = gauss_jacobi(func, lo, hi, e_lo, e_hi, n0)
    n = n0
    while n < n_max:
        n *= 2
        cur = gauss_jacobi(func, lo, hi, e_lo, e_hi, n)
        err = abs(cur - prev)
        if err <= max(rel_tol * abs(cur), abs_tol):
            return cur, err
        prev = cur
    return alg_quad(lambda x: float(func(np.array([x]))[0]), lo, hi, e_lo, e_hi,
                    rel_tol=rel_tol, abs_tol=abs_tol, breakpoints=breakpoints)


def alg_quad(func, lo, hi, e_lo, e_hi, rel_tol=1e-10, abs_tol=1e-13, limit=400,
             breakpoints: Sequence[float] = ()):
    """QUADPACK integral of func(x) (x-lo)^e_lo (hi-x)^e_hi over [lo, hi].

    Interior breakpoints split the range: the end pieces keep their
    algebraic weight, interior pieces use the plain adaptive rule.
    """
    pts = sorted(p for p in breakpoints if lo < p < hi)
    edges = [lo, *pts, hi]
    total, err = 0.0, 0.0
    for i, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
        first, last = i == 0, i == len(edges) - 2
        wl = e_lo if first else 0.0
        wh = e_hi if last else 0.0

        def g(x, a=a, b=b, first=first, last=last):
            v = func(x)
            if not first:
                v *= (x - lo) ** e_lo
            if not last:
                v *= (hi - x) ** e_hi
            return v

        if wl == 0.0 and wh == 0.0:
            v, e = integrate.quad(g, a, b, epsrel=rel_tol, epsabs=abs_tol, limit=limit)
        else:
            v, e = integrate.quad(g, a, b, weight="alg", wvar=(wl, wh),
                                  epsrel=rel_tol, epsabs=abs_tol, limit=limit)
        total += v
        err += e
    if not np.isfinite(total):
        raise QuadratureFailure("algebraic-weight quadrature produced a non-finite value")
    return total, err


# --------------------------------------------------------------------------
# tanh-sinh
# --------------------------------------------------------------------------

def tanh_sinh(func: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
              tol: float = 1e-12, max_level: int = 12,
              e_lo: float = 0.0, e_hi: float = 0.0) -> tuple[float, float]:
    """Double-exponential quadrature of func(x) (x-lo)^e_lo (hi-x)^e_hi.

    The weight is formed from the exact distance to each endpoint, so
    algebraic endpoint singularities keep full relative accuracy.  ``func``
    must be finite on the closed interval.
    """
    half = 0.5 * (hi - lo)
    h = 1.0
    # reach deep enough that the neglected endpoint mass is below ~1e-17
    strength = max(1.0 + min(e_lo, e_hi, 0.0), 1e-12)
    u_need = 20.0 / strength
    kmax = max(6.0, math.ceil(math.asinh(2.0 * u_need / math.pi)) + 1.0)

    def level_sum(ts):
        u = 0.5 * math.pi * np.sinh(ts)
        log_cosh = u + np.log1p(np.exp(-2.0 * u)) - math.log(2.0)
        log_d = math.log(half) - u - log_cosh  # distance to the nearer endpoint
        log_w = np.log(0.5 * math.pi * np.cosh(ts)) - 2.0 * log_cosh
        d = np.exp(log_d)
        # nodes may round onto an endpoint; func is a bounded cofactor there
        xl = lo + d
        xr = hi - d
        log_far = np.log(2.0 * half - d)
        wl = np.exp(log_w + e_lo * log_d + e_hi * log_far)
        wr = np.exp(log_w + e_lo * log_far + e_hi * log_d)
        return np.sum(wl * func(xl) + wr * func(xr))

    mid = float(func(np.array([lo + half]))[0]) * half ** (e_lo + e_hi)
    ts = np.arange(1, int(kmax / h) + 1) * h
    total = mid * 0.5 * math.pi + level_sum(ts)
    est = total * h * half
    err = math.inf
    for _ in range(max_level):
        h *= 0.5
        ts = (np.arange(int(kmax / h) // 2) * 2 + 1) * h
        total += level_sum(ts)
        new = total * h * half
        err = abs(new - est)
        est = new
        if err <= tol * max(abs(new), 1e-300):
            break
    return float(est), float(err)


# --------------------------------------------------------------------------
# oscillatory Bessel-product integrals
# --------------------------------------------------------------------------

def _expint_tail(s: float, omega: float, R: float) -> complex:
    """int_R^inf r^{-s} e^{i omega r} dr."""
    if abs(omega) * R < 1e-12:
        if s <= 1.0:
            raise NoConvergence("non-oscillatory tail with decay r^-s, s <= 1, diverges")
        return complex(R ** (1.0 - s) / (s - 1.0))
    if s <= 0.0:
        raise NoConvergence("oscillatory tail with non-decaying amplitude")
    return complex(R ** (1.0 - s) * mpmath.expint(s, -1j * omega * R))


def _tail_integral(power: float, factors, R: float, n_terms: int = 16) -> float:
    """Exact integration of the Hankel-expanded product over [R, inf)."""
    k = len(factors)
    series = []
    for order, scale in factors:
        a = hankel_coefficients(order, n_terms)
        c = a * (1j ** np.arange(n_terms)) / scale ** np.arange(n_terms)
        phase = (0.5 * order + 0.25) * math.pi
        series.append((c, scale, phase))
    amp = math.prod(math.sqrt(2.0 / (math.pi * sc)) for _, sc, _ in series)
    base = power - 0.5 * k
    total = 0.0
    c0, a0, p0 = series[0]
    for signs in itertools.product((1, -1), repeat=k - 1):
        coeff = c0.copy()
        omega = a0
        phi = -p0
        for sgn, (c, sc, ph) in zip(signs, series[1:]):
            cc = c if sgn > 0 else np.conj(c)
            coeff = np.convolve(coeff, cc)[:n_terms]
            omega += sgn * sc
            phi -= sgn * ph
        acc = 0j
        # |int_R^inf r^{-s} e^{i w r}| <= R^{1-s}/(s-1) for s > 1: drop negligible terms
        mags = np.abs(coeff) * R ** (-np.arange(n_terms, dtype=float))
        keep = mags > 1e-18 * mags[0]
        for m in range(n_terms):
            if not keep[m]:
                continue
            acc += coeff[m] * _expint_tail(m - base, omega, R)
        total += (np.exp(1j * phi) * acc).real
    return amp * total / 2 ** (k - 1)


def bessel_power_integral(power: float, factors: Sequence[tuple[float, float]],
                          lower: float = 0.0, gl_order: int = 24) -> float:
    """int_lower^inf r^power prod_k J_{order_k}(scale_k r) dr.

    ``factors`` is a sequence of (order, scale) with scale > 0.  The finite
    part is integrated on sub-intervals no longer than half the shortest
    oscillation period; the tail beyond R (where every Bessel argument
    exceeds 30) uses the Hankel expansion of each factor and exact
    generalized exponential integrals for each frequency combination.
    """
    factors = [(float(o), float(s)) for o, s in factors]
    if any(s <= 0 for _, s in factors):
        raise ValueError("Bessel scales must be positive")
    smin = min(s for _, s in factors)
    ssum = sum(s for _, s in factors)
    R = max(30.0 / smin, lower)
    total = 0.0
    start = lower
    step = math.pi / ssum

    if lower == 0.0:
        sigma = power + sum(o for o, _ in factors)
        if sigma <= -1.0:
            raise NoConvergence("integrand not integrable at r = 0")
        r1 = min(step, R)
        pref = math.prod((s / 2.0) ** o for o, s in factors)

        def smooth(r):
            out = np.full_like(r, pref)
            for o, s in factors:
                out *= bessel_j_scaled(o, s * r)
            return out

        x, w = jacobi_rule(gl_order, 0.0, sigma)
        nodes = 0.5 * r1 * (x + 1.0)
        total += float(np.dot(w, smooth(nodes))) * (0.5 * r1) ** (1.0 + sigma)
        start = r1

    if R > start:
        n_chunks = max(1, int(math.ceil((R - start) / step)))
        edges = np.linspace(start, R, n_chunks + 1)
        x, w = legendre_rule(gl_order)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        vals = np.power(nodes, power)
        for o, s in factors:
            vals = vals * bessel_j(o, s * nodes)
        total += float(np.sum(vals.reshape(n_chunks, gl_order) * w[None, :] * half[:, None]))
    total += _tail_integral(power, factors, R)
    return total
