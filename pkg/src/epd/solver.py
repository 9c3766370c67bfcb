"""Cauchy-problem solvers for the classical and radial EPD equations.

Quadrature solvers assemble the kernel representations; the series solver
sums the hypergeometric modes for polynomial data.  Every solver returns a
``SolutionSample`` carrying an error estimate.
"""

from __future__ import annotations

import cmath
import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels as K
from .data import CauchyData, DataFunction, RadialProfile, SeriesCoefficients
from .errors import DomainError, EPDError, NoConvergence, QuadratureFailure
from .kernels import EPDParameters
from .quadrature import QuadratureSpec, alg_quad, gauss_jacobi, jacobi_rule, tanh_sinh
from .specfun import hyp2f1, rgamma

__all__ = [
    "Method",
    "QuadratureSpec",
    "SolutionSample",
    "spherical_mean",
    "solve_classical",
    "solve_classical_modified",
    "solve_radial",
    "solve_radial_series",
    "solve_radial_modified",
    "solve_grid",
]


class Method(str, enum.Enum):
    CLASSICAL_QUAD = "ClassicalQuad"
    MODIFIED_QUAD = "ModifiedQuad"
    RADIAL_QUAD = "RadialQuad"
    RADIAL_SERIES = "RadialSeries"
    MODIFIED_RADIAL_QUAD = "ModifiedRadialQuad"


@dataclass(frozen=True)
class SolutionSample:
    t: float
    x: float | tuple[float, ...]
    value: float
    method: Method
    est_error: float
    phase: complex = 1.0
    region: str = ""
    skipped: bool = False
    note: str = ""

    @property
    def full_value(self) -> complex | float:
        return self.value if self.phase == 1 else self.value * self.phase


DEFAULT_QUAD = QuadratureSpec()


# --------------------------------------------------------------------------
# spherical means
# --------------------------------------------------------------------------

_CIRCLE_POINTS = 128
_SPHERE_THETA = 48
_SPHERE_PHI = 96


def _as_point(x, n: int) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.size == 1 and n > 1:
        x = np.concatenate([x, np.zeros(n - 1)])
    if x.shape != (n,):
        raise DomainError(f"point {x} is not in R^{n}")
    return x


def _eval_nd(f: DataFunction, pts: np.ndarray) -> np.ndarray:
    """f at points of shape (..., n); n = 1 is passed as scalars."""
    if pts.shape[-1] == 1:
        return np.asarray(f(pts[..., 0]), dtype=float)
    out = np.asarray(f(pts), dtype=float)
    if out.shape != pts.shape[:-1]:
        raise DomainError("data must accept points in R^n (use RadialProfile or a vector centre)")
    return out


@lru_cache(maxsize=4)
def _sphere_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Unit-sphere nodes and weights with total weight |S^{n-1}|."""
    if n == 2:
        th = 2.0 * np.pi * np.arange(_CIRCLE_POINTS) / _CIRCLE_POINTS
        nodes = np.stack([np.cos(th), np.sin(th)], axis=-1)
        return nodes, np.full(_CIRCLE_POINTS, 2.0 * np.pi / _CIRCLE_POINTS)
    c, wc = np.polynomial.legendre.leggauss(_SPHERE_THETA)
    ph = 2.0 * np.pi * np.arange(_SPHERE_PHI) / _SPHERE_PHI
    s = np.sqrt(1.0 - c * c)
    nodes = np.stack([
        (s[:, None] * np.cos(ph)[None, :]).ravel(),
        (s[:, None] * np.sin(ph)[None, :]).ravel(),
        np.repeat(c, _SPHERE_PHI),
    ], axis=-1)
    weights = np.repeat(wc, _SPHERE_PHI) * (2.0 * np.pi / _SPHERE_PHI)
    return nodes, weights


def spherical_mean(f: DataFunction, x, r, n: int):
    """Surface integral of f over the sphere |y - x| = r in R^n.

    Unnormalized: f = 1 gives 2 pi^{n/2}/Gamma(n/2).  Vectorized over r.
    """
    if n not in (1, 2, 3):
        raise DomainError(f"spherical means implemented for n in {{1,2,3}}, got {n}")
    x = _as_point(x, n)
    scalar = np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r < 0):
        raise DomainError("radius must be non-negative")
    if n == 1:
        out = f(x[0] + r) + f(x[0] - r)
    else:
        nodes, weights = _sphere_nodes(n)
        pts = x[None, None, :] + r[:, None, None] * nodes[None, :, :]
        out = _eval_nd(f, pts) @ weights
    return float(out[0]) if scalar else out


# --------------------------------------------------------------------------
# classical EPD
# --------------------------------------------------------------------------

def _phi_rule(func_of_s, e: float, n_dim: int, rel_tol: float, n0: int = 16, n_max: int = 512):
    """Choose a Gauss-Jacobi order for int_0^1 F(s) (1-s^2)^e s^{n-1} ds.

    ``func_of_s`` maps nodes (k,) to values (m, k) for m stencil times; the
    order is doubled until all m integrals agree between successive orders.
    Returns (values (m,), error estimate).
    """
    def integrate(order):
        s, w = jacobi_rule(order, e, 0.0)
        s = 0.5 * (s + 1.0)
        vals = func_of_s(s) * ((1.0 + s) ** e * s ** (n_dim - 1))[None, :]
        return (vals @ w) * 0.5 ** (1.0 + e)

    prev = integrate(n0)
    order = n0
    while order < n_max:
        order *= 2
        cur = integrate(order)
        err = float(np.max(np.abs(cur - prev)))
        if err <= rel_tol * max(1.0, float(np.max(np.abs(cur)))):
            return cur, err
        prev = cur
    raise QuadratureFailure("Gauss-Jacobi order limit reached for the spherical-mean integral")


def _d_over_t(F_vals: np.ndarray, t: float, h: float) -> tuple[float, float]:
    """(1/t) dF/dt from F at t + (-h, -h/2, h/2, h), Richardson-combined."""
    fm, fmh, fph, fp = F_vals
    d1 = (fp - fm) / (2.0 * h)
    d2 = (fph - fmh) / h
    d = (4.0 * d2 - d1) / 3.0
    return d / t, abs(d2 - d1) / (3.0 * t)


_FD_REL_STEP = 0.02


def solve_classical(p: EPDParameters, data: CauchyData, t: float, x,
                    quad: QuadratureSpec = DEFAULT_QUAD) -> SolutionSample:
    """Classical EPD solution for n in {1, 2, 3}.

    The ball integrals are written as t^{n+2e} Phi(t) with
    Phi(t) = int_0^1 f#(ts)(1-s^2)^e s^{n-1} ds; the operator (1/t d/dt)^k
    (k <= 1 here) is applied to t^{n+2e} Phi(t) by central differences.
    """
    p.require_classical()
    n, mu = p.n, p.mu
    if n not in (1, 2, 3):
        raise DomainError("classical solver supports n in {1,2,3}")
    if not t > 0:
        raise DomainError("t must be positive")
    xpt = _as_point(x, n)
    odd = n % 2 == 1
    k = (n - 1) // 2 if odd else n // 2
    if odd:
        terms = [(data.f, -mu - 0.5, K.alpha_const(n, -mu) * t ** (2.0 * mu)),
                 (data.g, mu - 0.5, K.alpha_const(n, mu) / (2.0 * mu))]
    else:
        b = K.beta_const(n)
        terms = [(data.f, -mu, b * t ** (2.0 * mu)), (data.g, mu, b / (2.0 * mu))]

    h = _FD_REL_STEP * t
    times = np.array([t]) if k == 0 else t + np.array([-h, -0.5 * h, 0.5 * h, h])
    total, err = 0.0, 0.0
    for func, e, const in terms:
        if func.is_zero:
            continue

        def fs(s, func=func):
            r = times[:, None] * s[None, :]
            return spherical_mean(func, xpt, r.ravel(), n).reshape(r.shape)

        phi, qerr = _phi_rule(fs, e, n, quad.rel_tol * 0.01)
        F = times ** (n + 2.0 * e) * phi
        if k == 0:
            val, ferr = float(F[0]), 0.0
        else:
            val, ferr = _d_over_t(F, t, h)
        total += const * val
        err += abs(const) * (ferr + qerr * (t ** (n + 2.0 * e)) * (1.0 if k == 0 else 2.0 / h))
    return SolutionSample(t, _x_out(x), float(total), Method.CLASSICAL_QUAD, float(err),
                          region=K.Region.INNER_CONE.value)


def _x_out(x):
    if np.ndim(x) == 0:
        return float(x)
    x = np.asarray(x, float).ravel()
    return float(x[0]) if x.size == 1 else tuple(float(v) for v in x)


def _support_radius(f: DataFunction, xpt: np.ndarray) -> float:
    """Radius of a ball about xpt containing the support of f."""
    if isinstance(f, RadialProfile):
        rb = f.radius_bound()
        if rb is not None:
            c = np.asarray(f.center, float)
            dist = float(np.linalg.norm(xpt - c)) if c.ndim else float(np.linalg.norm(xpt - c))
            return dist + rb
        raise DomainError("data must be compactly supported (or Gaussian)")
    sup = f.support()
    if sup is None:
        c = getattr(f, "center", None)
        reach = getattr(f, "radius", None) or (9.0 * getattr(f, "width", 0.0) or None)
        if c is None or reach is None:
            raise DomainError("data must be compactly supported (or Gaussian)")
        return float(np.linalg.norm(xpt - np.asarray(c, float))) + reach
    if xpt.size != 1:
        raise DomainError("scalar data in R^n needs a RadialProfile wrapper")
    return max(abs(xpt[0] - sup[0]), abs(xpt[0] - sup[1]))


def solve_classical_modified(p: EPDParameters, data: CauchyData, t: float, x,
                             quad: QuadratureSpec = DEFAULT_QUAD) -> SolutionSample:
    """Solution with the modified conditions through the N kernels.

    The R^n integral is reduced to int_0^R N(t, r) f#(r) r^{n-1} dr and split
    at the cone r = t.  The value is the real profile; ``phase`` is e^{i pi q}.
    """
    p.require_classical_modified()
    n, mu, q = p.n, p.mu, p.q
    if not t > 0:
        raise DomainError("t must be positive")
    xpt = _as_point(x, n)
    total, err = 0.0, 0.0
    for func, m, const in ((data.f, -mu, 1.0), (data.g, mu, t ** (2.0 * mu) / (2.0 * mu))):
        if func.is_zero:
            continue
        R = _support_radius(func, xpt)

        def integrand(r, func=func, m=m):
            r = np.atleast_1d(np.asarray(r, float))
            return (K.n_profile(n, m, q, t, r) * spherical_mean(func, xpt, r, n)
                    * r ** (n - 1))

        pieces = [(0.0, min(t, R))]
        if R > t:
            pieces.append((t, R))
        for lo, hi in pieces:
            if hi <= lo:
                continue
            if quad.scheme == "TanhSinh":
                v, e = tanh_sinh(integrand, lo, hi, tol=quad.rel_tol)
            else:
                from scipy import integrate
                v, e = integrate.quad(lambda r: float(integrand(r)[0]), lo, hi,
                                      epsrel=quad.rel_tol, epsabs=quad.abs_tol,
                                      limit=quad.max_subdivisions)
            total += const * v
            err += abs(const) * e
    return SolutionSample(t, _x_out(x), total, Method.MODIFIED_QUAD, err,
                          phase=cmath.exp(1j * math.pi * q))


# --------------------------------------------------------------------------
# radial EPD
# --------------------------------------------------------------------------

def _radial_pieces(func: DataFunction, m: float, nu: float, t: float, x: float,
                   quad: QuadratureSpec) -> tuple[float, float]:
    """int_0^inf func(x') K_m(t, x, x') x'^{1-2nu} dx' for m = +-mu."""
    e = m - 0.5
    lo, hi = abs(x - t), x + t
    bps = tuple(b for b in func.breakpoints() if lo < b < hi)
    tol = quad.rel_tol * 0.01

    def shell(xp):
        return func(xp) * K.k_shell_factored(m, nu, t, x, xp) * xp ** (1.0 - 2.0 * nu)

    total, err = _weighted(shell, lo, hi, e, e, tol, quad, bps)
    if t > x:
        top = t - x
        bps_in = tuple(b for b in func.breakpoints() if 0.0 < b < top)

        def inner(xp):
            return func(xp) * K.k_inner_factored(m, nu, t, x, xp) * xp ** (1.0 - 2.0 * nu)

        v, e2 = _weighted(inner, 0.0, top, 0.0, e, tol, quad, bps_in)
        total += v
        err += e2
    return total, err


def _weighted(func, lo, hi, e_lo, e_hi, tol, quad: QuadratureSpec, bps=()):
    """Gauss-Jacobi with order doubling; QUADPACK algebraic weights on failure."""
    if not bps:
        prev = gauss_jacobi(func, lo, hi, e_lo, e_hi, 24)
        n = 24
        while n < 384:
            n *= 2
            cur = gauss_jacobi(func, lo, hi, e_lo, e_hi, n)
            diff = abs(cur - prev)
            if diff <= max(tol * abs(cur), quad.abs_tol):
                return cur, diff
            prev = cur
    # QAWS may sample the endpoints, where the cofactor can be 0 * inf
    pad = 1e-14 * (hi - lo)

    def point(v):
        return float(func(np.array([min(max(v, lo + pad), hi - pad)]))[0])

    return alg_quad(point, lo, hi, e_lo, e_hi,
                    rel_tol=quad.rel_tol, abs_tol=quad.abs_tol,
                    limit=max(quad.max_subdivisions, 50), breakpoints=bps)


def solve_radial(p: EPDParameters, data: CauchyData, t: float, x: float,
                 quad: QuadratureSpec = DEFAULT_QUAD) -> SolutionSample:
    """Radial EPD solution by quadrature of the K kernels.

    The f-term uses K_{-mu} with the t^{2 mu} prefactor, the g-term K_mu with
    1/(2 mu).  The shell (|x-t|, x+t) carries endpoint weights (.)^{+-mu-1/2};
    for t > x the inner cone (0, t-x) is added.
    """
    p.require_radial()
    mu, nu = p.mu, p.nu
    if not (t > 0 and x > 0):
        raise DomainError("solve_radial needs t > 0 and x > 0")
    total, err = 0.0, 0.0
    if not data.f.is_zero:
        v, e = _radial_pieces(data.f, -mu, nu, t, x, quad)
        c = t ** (2.0 * mu)
        total += c * v
        err += c * e
    if not data.g.is_zero:
        v, e = _radial_pieces(data.g, mu, nu, t, x, quad)
        total += v / (2.0 * mu)
        err += e / (2.0 * mu)
    region = K.Region.SHELL.value if t <= x else "Shell+InnerCone"
    return SolutionSample(t, x, total, Method.RADIAL_QUAD, err, region=region)


def radial_series_values(mu: float, nu: float, coeffs: SeriesCoefficients, t, x) -> np.ndarray:
    """Vectorized sum of a_l U_l + b_l V_l; requires 0 <= t < x."""
    t = np.asarray(t, float)
    x = np.asarray(x, float)
    t, x = np.broadcast_arrays(t, x)
    if np.any(t >= x) or np.any(t < 0) or np.any(x <= 0):
        raise DomainError("series solution needs 0 <= t < x")
    w = (t / x) ** 2
    out = np.zeros(t.shape)
    for l, a in enumerate(coeffs.a):
        if a != 0.0:
            out += a * x ** l * hyp2f1(-l / 2.0, nu - l / 2.0, 1.0 - mu, w.ravel()).reshape(t.shape)
    pref = t ** (2.0 * mu) / (2.0 * mu)
    for l, b in enumerate(coeffs.b):
        if b != 0.0:
            out += b * pref * x ** l * hyp2f1(-l / 2.0, nu - l / 2.0, 1.0 + mu, w.ravel()).reshape(t.shape)
    return out


def solve_radial_series(p: EPDParameters, coeffs: SeriesCoefficients, t: float, x: float) -> SolutionSample:
    """Series solution for polynomial data; valid for 0 < mu < 1 and t < x."""
    p.require_series()
    if rgamma(1.0 - p.mu) == 0.0:
        raise DomainError("1 - mu is a Gamma pole")
    v = float(radial_series_values(p.mu, p.nu, coeffs, t, x))
    return SolutionSample(t, x, v, Method.RADIAL_SERIES, 4e-16 * max(1.0, abs(v)) * (coeffs.L + 1),
                          region=K.Region.SHELL.value)


def _h_cofactor(m, nu, q, t, x, func, xp):
    """func(x') H_m(t, x, x') x'^{1-2nu} at a single x'."""
    prof = K.h_kernel(EPDParameters(m, nu, q=q), t, x, xp).profile
    return float(func(np.array([xp]))[0]) * prof * xp ** (1.0 - 2.0 * nu)


def solve_radial_modified(p: EPDParameters, data: CauchyData, t: float, x: float,
                          quad: QuadratureSpec = DEFAULT_QUAD) -> SolutionSample:
    """Solution with the modified conditions through the H kernels.

    The x' axis is split at x + t: the F4 series applies beyond it, the
    triple-Bessel continuation inside.  Data must be compactly supported.
    The value is the real profile; ``phase`` is e^{i pi q}.
    """
    p.require_radial_modified()
    mu, nu, q = p.mu, p.nu, p.q
    if not (t > 0 and x > 0):
        raise DomainError("solve_radial_modified needs t > 0 and x > 0")
    kmag, kphase = K.k_const(nu, q)
    edge = x + t
    total, err = 0.0, 0.0
    for func, m, const in ((data.f, -mu, kmag), (data.g, mu, kmag * t ** (2.0 * mu) / (2.0 * mu))):
        if func.is_zero:
            continue
        sup = func.support()
        if sup is None:
            raise DomainError("solve_radial_modified needs compactly supported data")
        a, b = max(sup[0], 0.0), sup[1]
        if b <= a:
            continue
        # singular exponent of H at x' = x + t
        e = m - 2.0 * q - 1.5
        bps = func.breakpoints()

        def g(xp, m=m, func=func):
            return _h_cofactor(m, nu, q, t, x, func, xp)

        if b > edge:
            lo = max(a, edge)
            inner_bps = [v for v in bps if lo < v < b]
            if lo == edge:
                v, er = alg_quad(lambda xp: g(xp) * (xp - edge) ** (-e), lo, b, e, 0.0,
                                 rel_tol=quad.rel_tol, abs_tol=quad.abs_tol,
                                 limit=max(quad.max_subdivisions, 50), breakpoints=inner_bps)
            else:
                v, er = alg_quad(g, lo, b, 0.0, 0.0, rel_tol=quad.rel_tol, abs_tol=quad.abs_tol,
                                 limit=max(quad.max_subdivisions, 50), breakpoints=inner_bps)
            total += const * v
            err += abs(const) * er
        if a < edge:
            hi = min(b, edge)
            inner_bps = [v for v in list(bps) + [abs(x - t)] if a < v < hi]
            if hi == edge:
                v, er = alg_quad(lambda xp: g(xp) * (edge - xp) ** (-e), a, hi, 0.0, e,
                                 rel_tol=quad.rel_tol, abs_tol=quad.abs_tol,
                                 limit=max(quad.max_subdivisions, 50), breakpoints=inner_bps)
            else:
                v, er = alg_quad(g, a, hi, 0.0, 0.0, rel_tol=quad.rel_tol, abs_tol=quad.abs_tol,
                                 limit=max(quad.max_subdivisions, 50), breakpoints=inner_bps)
            total += const * v
            err += abs(const) * er
    return SolutionSample(t, x, total, Method.MODIFIED_RADIAL_QUAD, err, phase=kphase)


# --------------------------------------------------------------------------
# grids
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    t: tuple[float, ...]
    x: tuple[float, ...]

    def __post_init__(self):
        for name in ("t", "x"):
            v = np.asarray(getattr(self, name), float)
            if v.size == 0:
                raise DomainError(f"grid axis {name} is empty")
            if v.size > 1 and not (np.all(np.diff(v) > 0) or np.all(np.diff(v) < 0)):
                raise DomainError(f"grid axis {name} must be monotone")
            object.__setattr__(self, name, tuple(float(a) for a in v))

    def points(self):
        return [(t, x) for t in self.t for x in self.x]


def _solve_point(method: Method, p, data, coeffs, t, x, quad) -> SolutionSample:
    try:
        if method is Method.RADIAL_SERIES:
            return solve_radial_series(p, coeffs, t, x)
        if method is Method.RADIAL_QUAD:
            return solve_radial(p, data, t, x, quad)
        if method is Method.CLASSICAL_QUAD:
            return solve_classical(p, data, t, x, quad)
        if method is Method.MODIFIED_QUAD:
            return solve_classical_modified(p, data, t, x, quad)
        if method is Method.MODIFIED_RADIAL_QUAD:
            return solve_radial_modified(p, data, t, x, quad)
    except DomainError as exc:
        return SolutionSample(t, x, math.nan, method, math.nan, skipped=True, note=f"skipped: {exc}")
    except NoConvergence as exc:
        return SolutionSample(t, x, math.nan, method, math.nan, skipped=True,
                              note=f"no convergence: {exc}")
    raise ValueError(f"unknown method {method}")


def solve_grid(method: Method | str, p: EPDParameters, grid: Grid, data: CauchyData | None = None,
               coeffs: SeriesCoefficients | None = None, quad: QuadratureSpec = DEFAULT_QUAD,
               workers: int = 1) -> list[SolutionSample]:
    """Evaluate a solver on every (t, x) of ``grid`` (t-major order).

    Points outside a solver's domain are returned with ``skipped=True`` and a
    note; nothing is dropped.
    """
    method = Method(method)
    if method is Method.RADIAL_SERIES:
        if coeffs is None:
            raise DomainError("RadialSeries needs series coefficients")
        return _series_grid(p, coeffs, grid)
    if data is None:
        raise DomainError(f"{method.value} needs Cauchy data")
    pts = grid.points()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda tx: _solve_point(method, p, data, None, tx[0], tx[1], quad), pts))
    return [_solve_point(method, p, data, None, t, x, quad) for t, x in pts]


def _series_grid(p: EPDParameters, coeffs: SeriesCoefficients, grid: Grid) -> list[SolutionSample]:
    try:
        p.require_series()
    except DomainError as exc:
        return [SolutionSample(t, x, math.nan, Method.RADIAL_SERIES, math.nan, skipped=True,
                               note=f"skipped: {exc}") for t, x in grid.points()]
    T, X = np.meshgrid(np.asarray(grid.t), np.asarray(grid.x), indexing="ij")
    ok = (T >= 0) & (T < X) & (X > 0)
    vals = np.full(T.shape, math.nan)
    if ok.any():
        vals[ok] = radial_series_values(p.mu, p.nu, coeffs, T[ok], X[ok])
    out = []
    scale = coeffs.L + 1
    for i, t in enumerate(grid.t):
        for j, x in enumerate(grid.x):
            if ok[i, j]:
                v = float(vals[i, j])
                out.append(SolutionSample(t, x, v, Method.RADIAL_SERIES, 4e-16 * max(1.0, abs(v)) * scale,
                                          region=K.Region.SHELL.value))
            else:
                out.append(SolutionSample(t, x, math.nan, Method.RADIAL_SERIES, math.nan, skipped=True,
                                          note="skipped: series solution needs 0 <= t < x"))
    return out
