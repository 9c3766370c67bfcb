"""Solution kernels W, N, K, H of the EPD Cauchy problems.

Each public kernel returns a ``KernelValue``: a real profile times a unit
phase (e^{i pi q} for the q-kernels) plus the light-cone region tag.
Vectorized ``*_profile`` helpers are used by the solvers.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, LightConeError
from .specfun import (
    DEFAULT_CONTROL,
    SeriesControl,
    appell_f4,
    gamma_fn,
    hyp2f1,
    lgamma_sign,
    pochhammer,
    rgamma,
)

CONE_GUARD = 1e-9
BOUNDARY_TOL = 1e-12
# beyond this value of sqrt(X)+sqrt(Y) the F4 series is replaced by the integral
F4_SERIES_LIMIT = 0.9


class Region(str, enum.Enum):
    """Light-cone regions.

    For the classical family |x - x'| > t is OUTSIDE_CONE and |x - x'| < t is
    INNER_CONE (the interior of the cone); SHELL only occurs radially.
    """

    OUTSIDE_CONE = "OutsideCone"
    SHELL = "Shell"
    INNER_CONE = "InnerCone"


@dataclass(frozen=True)
class EPDParameters:
    """Parameters (mu, nu, n, q); unused ones stay None."""

    mu: float
    nu: float | None = None
    n: int | None = None
    q: float | None = None

    def __post_init__(self):
        for name in ("mu", "nu", "q"):
            v = getattr(self, name)
            if v is not None and not math.isfinite(v):
                raise DomainError(f"{name} must be finite")
        if self.n is not None and (int(self.n) != self.n or self.n < 1):
            raise DomainError("n must be a positive integer")

    def with_mu(self, mu: float) -> "EPDParameters":
        return EPDParameters(mu, self.nu, self.n, self.q)

    # regime checks -------------------------------------------------------
    def require_integral(self):
        if not 0.0 < self.mu < 0.5:
            raise DomainError(f"integral solutions need 0 < mu < 1/2, got {self.mu}")

    def require_series(self):
        if not 0.0 < self.mu < 1.0:
            raise DomainError(f"series solution needs 0 < mu < 1, got {self.mu}")
        self._require_nu()

    def _require_nu(self):
        if self.nu is None or not self.nu > -0.5:
            raise DomainError(f"nu must be > -1/2, got {self.nu}")

    def _require_n(self):
        if self.n is None:
            raise DomainError("dimension n is required")

    def require_classical(self):
        self.require_integral()
        self._require_n()

    def require_radial(self):
        self.require_integral()
        self._require_nu()

    def require_classical_modified(self):
        self.require_classical()
        lo, hi = -self.n / 2.0, -self.mu / 2.0 - self.n / 4.0
        if self.q is None or not lo < self.q < hi:
            raise DomainError(f"q must lie in ({lo}, {hi}), got {self.q}")

    def require_radial_modified(self):
        self.require_radial()
        hi = -self.mu / 2.0 - 0.25
        if self.q is None or not -0.5 < self.q < hi:
            raise DomainError(f"q must lie in (-1/2, {hi}), got {self.q}")


@dataclass(frozen=True)
class KernelGeometry:
    t: float
    x: float | np.ndarray
    xp: float | np.ndarray
    z: float
    X: float
    region: Region
    boundary_adjacent: bool


@dataclass(frozen=True)
class KernelValue:
    profile: float
    phase: complex
    region: Region

    @property
    def value(self) -> complex | float:
        if self.phase == 1:
            return self.profile
        return self.profile * self.phase


def alpha_const(n: int, mu: float) -> float:
    """alpha_{n,mu} of the odd-dimension solution formula."""
    return gamma_fn(1.0 + mu) / (2.0 ** ((n - 1) / 2.0) * math.pi ** (n / 2.0)
                                 * gamma_fn(0.5 + mu))


def beta_const(n: int) -> float:
    return (2.0 * math.pi) ** (-n / 2.0)


def c_const(n: int, mu: float) -> float:
    """C_{n,mu}; zero when 1 + mu - n/2 is a Gamma pole."""
    return gamma_fn(1.0 + mu) * rgamma(1.0 + mu - n / 2.0) / math.pi ** (n / 2.0)


def k_const(nu: float, q: float) -> tuple[float, complex]:
    """K(nu, q) split into (real profile, phase e^{i pi q})."""
    mag = 2.0 ** (2.0 * q + 1.0) * gamma_fn(q + 1.0 + nu) * rgamma(1.0 + nu) * rgamma(-q)
    return mag, cmath.exp(1j * math.pi * q)


@dataclass(frozen=True)
class NormalizationConstants:
    alpha_n_mu: float | None
    beta_n: float | None
    c_n_mu: float | None
    k_nu_q: complex | None

    @classmethod
    def for_params(cls, p: EPDParameters) -> "NormalizationConstants":
        alpha = beta = c = k = None
        if p.n is not None:
            alpha = alpha_const(p.n, p.mu)
            beta = beta_const(p.n)
            c = c_const(p.n, p.mu)
        if p.nu is not None and p.q is not None:
            mag, ph = k_const(p.nu, p.q)
            k = mag * ph
        return cls(alpha, beta, c, k)


# --------------------------------------------------------------------------
# region classification
# --------------------------------------------------------------------------

def classify_region(t: float, x, xp) -> KernelGeometry:
    """Region of the source point x' relative to the cone from (t, x).

    Scalars select the radial family (x, x' > 0) and produce z and X; points
    in R^n select the classical family and z is |x - x'|^2 / t^2.
    """
    if not t > 0:
        raise DomainError("t must be positive")
    if np.ndim(x) > 0 or np.ndim(xp) > 0:
        d = float(np.linalg.norm(np.asarray(x, float) - np.asarray(xp, float)))
        ratio = d * d / (t * t)
        region = Region.OUTSIDE_CONE if d > t else Region.INNER_CONE
        return KernelGeometry(t, x, xp, ratio, math.nan, region, abs(ratio - 1.0) < BOUNDARY_TOL)
    x, xp = float(x), float(xp)
    if not (x > 0 and xp > 0):
        raise DomainError("radial kernels need x > 0 and x' > 0")
    z = (x * x + xp * xp - t * t) / (2.0 * x * xp)
    if z > 1.0:
        region = Region.OUTSIDE_CONE
    elif z > -1.0:
        region = Region.SHELL
    else:
        region = Region.INNER_CONE
    edge = abs(z - 1.0) < BOUNDARY_TOL or abs(z + 1.0) < BOUNDARY_TOL
    return KernelGeometry(t, x, xp, z, (1.0 - z) / 2.0, region, edge)


def _guard_cone(t, d):
    if abs(t - d) <= CONE_GUARD * max(1.0, t):
        raise LightConeError(f"point within {CONE_GUARD} of the light cone t = |x-x'|")


# --------------------------------------------------------------------------
# W kernel
# --------------------------------------------------------------------------

def w_profile(n: int, mu: float, t, d):
    """C_{n,mu}(t^2 - d^2)^{mu-n/2} inside the cone, 0 outside (vectorized)."""
    t = np.asarray(t, float)
    d = np.asarray(d, float)
    s = t * t - d * d
    inside = s > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        val = c_const(n, mu) * np.power(np.where(inside, s, 1.0), mu - n / 2.0)
    return np.where(inside, val, 0.0)


def w_kernel(p: EPDParameters, t: float, x, xp) -> KernelValue:
    """W_{n,mu}(t, x, x'); zero (tagged OutsideCone) for |x - x'| > t."""
    if p.n is None:
        raise DomainError("w_kernel needs n")
    x = np.atleast_1d(np.asarray(x, float))
    xp = np.atleast_1d(np.asarray(xp, float))
    geo = classify_region(t, x, xp)
    d = float(np.linalg.norm(x - xp))
    if geo.region is Region.OUTSIDE_CONE:
        return KernelValue(0.0, 1.0, geo.region)
    _guard_cone(t, d)
    return KernelValue(float(w_profile(p.n, p.mu, t, d)), 1.0, geo.region)


def w_derivative_form(p: EPDParameters, t: float, d: float) -> float:
    """W through its (d/t dt)^k representation.

    (1/t d/dt)^k (t^2-d^2)^s = 2^k s(s-1)...(s-k+1) (t^2-d^2)^{s-k}, with
    s = mu - 1/2, k = (n-1)/2 (odd n) or s = mu, k = n/2 (even n).
    """
    n = p.n
    if n % 2:
        k, s, const = (n - 1) // 2, p.mu - 0.5, alpha_const(n, p.mu)
    else:
        k, s, const = n // 2, p.mu, beta_const(n)
    falling = pochhammer(s - k + 1.0, k)
    return const * 2.0 ** k * falling * (t * t - d * d) ** (s - k)


# --------------------------------------------------------------------------
# N kernel
# --------------------------------------------------------------------------

def _n_prefactors(n: int, mu: float, q: float):
    base = 2.0 ** (2.0 * q + n / 2.0) * gamma_fn(q + n / 2.0) / (2.0 * math.pi) ** n
    outer = base * rgamma(-q)
    inner = base * gamma_fn(1.0 + mu) * rgamma(n / 2.0) * rgamma(1.0 + mu - q - n / 2.0)
    return outer, inner


def n_profile(n: int, mu: float, q: float, t, d, ctl: SeriesControl = DEFAULT_CONTROL):
    """Real profile of N_mu; d = |x - x'| (vectorized over d)."""
    d = np.atleast_1d(np.asarray(d, float))
    outer, inner = _n_prefactors(n, mu, q)
    out = np.empty_like(d)
    far = d > t
    if far.any():
        dd = d[far]
        out[far] = outer * dd ** (-2.0 * q - n) * hyp2f1(
            q + n / 2.0, q + 1.0, mu + 1.0, (t / dd) ** 2, ctl)
    if (~far).any():
        dd = d[~far]
        out[~far] = inner * t ** (-2.0 * q - n) * hyp2f1(
            q + n / 2.0, q + n / 2.0 - mu, n / 2.0, (dd / t) ** 2, ctl)
    return out


def n_kernel(p: EPDParameters, t: float, x, xp, ctl: SeriesControl = DEFAULT_CONTROL) -> KernelValue:
    """N_mu(t, x, x') with its two light-cone branches."""
    p.require_classical_modified()
    x = np.atleast_1d(np.asarray(x, float))
    xp = np.atleast_1d(np.asarray(xp, float))
    geo = classify_region(t, x, xp)
    d = float(np.linalg.norm(x - xp))
    _guard_cone(t, d)
    prof = float(n_profile(p.n, p.mu, p.q, t, d, ctl)[0])
    return KernelValue(prof, cmath.exp(1j * math.pi * p.q), geo.region)


def n_branch_limits(p: EPDParameters, t: float) -> dict:
    """One-sided limits of both N branches on the cone d = t (Gauss sums).

    Returns the two limits and their ratio; whether they agree is reported,
    not assumed.
    """
    n, mu, q = p.n, p.mu, p.q
    outer, inner = _n_prefactors(n, mu, q)

    def gauss(a, b, c):
        return gamma_fn(c) * gamma_fn(c - a - b) * rgamma(c - a) * rgamma(c - b)

    lim_out = outer * t ** (-2.0 * q - n) * gauss(q + n / 2.0, q + 1.0, mu + 1.0)
    lim_in = inner * t ** (-2.0 * q - n) * gauss(q + n / 2.0, q + n / 2.0 - mu, n / 2.0)
    return {"outside": lim_out, "inside": lim_in, "ratio": lim_out / lim_in}


# --------------------------------------------------------------------------
# K kernel
# --------------------------------------------------------------------------

def _k_shell_const(mu: float) -> float:
    return 2.0 ** (mu - 0.5) * gamma_fn(1.0 + mu) / (math.sqrt(math.pi) * gamma_fn(0.5 + mu))


def _k_inner_const(mu: float, nu: float) -> float:
    la, sa = lgamma_sign(1.0 + mu)
    lb, sb = lgamma_sign(1.0 - mu + nu)
    lc, sc = lgamma_sign(nu + 1.0)
    return (2.0 ** (mu - nu) * sa * sb * sc * math.exp(la + lb - lc)
            * math.sin((mu - nu) * math.pi) / math.pi)


def k_profile(mu: float, nu: float, t: float, x: float, xp, ctl: SeriesControl = DEFAULT_CONTROL):
    """K_mu on an array of x' (0 outside the cone; the cone itself excluded)."""
    xp = np.atleast_1d(np.asarray(xp, float))
    z = (x * x + xp * xp - t * t) / (2.0 * x * xp)
    out = np.zeros_like(xp)
    shell = (z < 1.0) & (z > -1.0)
    inner = z < -1.0
    if shell.any():
        zz = z[shell]
        out[shell] = (_k_shell_const(mu) * (x * xp[shell]) ** (nu + mu - 1.0)
                      * (1.0 - zz) ** (mu - 0.5)
                      * hyp2f1(0.5 - nu, 0.5 + nu, 0.5 + mu, (1.0 - zz) / 2.0, ctl))
    if inner.any():
        zz = z[inner]
        # z^{mu-nu-1} taken as |z|^{mu-nu-1}
        out[inner] = (_k_inner_const(mu, nu) * (x * xp[inner]) ** (nu + mu - 1.0)
                      * np.abs(zz) ** (mu - nu - 1.0)
                      * hyp2f1((nu - mu + 1.0) / 2.0, (nu - mu) / 2.0 + 1.0, nu + 1.0,
                               1.0 / (zz * zz), ctl))
    return out


def k_kernel(p: EPDParameters, t: float, x: float, xp: float,
             ctl: SeriesControl = DEFAULT_CONTROL) -> KernelValue:
    """K_mu(t, x, x') on the three light-cone regions."""
    if p.nu is None or not p.nu > -0.5:
        raise DomainError("k_kernel needs nu > -1/2")
    if not abs(p.mu) < 0.5 or p.mu == 0:
        raise DomainError("k_kernel needs 0 < |mu| < 1/2")
    geo = classify_region(t, x, xp)
    if geo.region is Region.OUTSIDE_CONE:
        return KernelValue(0.0, 1.0, geo.region)
    if abs(geo.z - 1.0) < CONE_GUARD or abs(geo.z + 1.0) < CONE_GUARD:
        raise LightConeError("k_kernel evaluated on the light cone")
    return KernelValue(float(k_profile(p.mu, p.nu, t, x, xp, ctl)[0]), 1.0, geo.region)


def k_shell_factored(mu: float, nu: float, t: float, x: float, xp):
    """Shell kernel with the endpoint powers removed.

    On the shell (lo, hi) = (|x-t|, x+t),
        K_mu = k_shell_factored * (x' - lo)^e * (hi - x')^e,  e = mu - 1/2,
    using Euler's transformation to move the z = -1 singularity of the
    2F1 into an explicit power.  The cofactor stays bounded at both ends.
    """
    xp = np.asarray(xp, float)
    # the two factors of 4x^2x'^2(1-z^2) that do not vanish on the shell
    other = (x + xp + t) * (xp + abs(x - t))
    # X = 1 exactly at x' = t - x; clip rounding excess
    X = np.minimum((t * t - (x - xp) ** 2) / (4.0 * x * xp), 1.0)
    e = mu - 0.5
    return (_k_shell_const(mu) * 2.0 ** (0.5 - mu) * (x * xp) ** (nu + mu - 1.0)
            * (other / (4.0 * x * x * xp * xp)) ** e
            * hyp2f1(mu + nu, mu - nu, 0.5 + mu, X))


def k_inner_factored(mu: float, nu: float, t: float, x: float, xp):
    """Inner-cone kernel on (0, t-x) with the factor (t-x-x')^{mu-1/2} removed."""
    xp = np.asarray(xp, float)
    w = t * t - x * x - xp * xp  # = 2x x' |z|
    a = (nu - mu + 1.0) / 2.0
    b = (nu - mu) / 2.0 + 1.0
    c = nu + 1.0
    u = np.minimum((2.0 * x * xp / w) ** 2, 1.0)  # 1/z^2
    e = mu - 0.5
    # 1 - 1/z^2 = (t-x-x')(t+x+x')(t-x+x')(t+x-x') / w^2
    rest = (t + x + xp) * (t - x + xp) * (t + x - xp) / (w * w)
    return (_k_inner_const(mu, nu) * (x * xp) ** (nu + mu - 1.0)
            * (w / (2.0 * x * xp)) ** (mu - nu - 1.0)
            * rest ** e * hyp2f1(c - a, c - b, c, u))


# --------------------------------------------------------------------------
# H kernel
# --------------------------------------------------------------------------

def _h_integral_const(a: float, mu: float, nu: float) -> float:
    return (2.0 ** (2.0 * a - 1.0 - mu) * gamma_fn(a + nu)
            * rgamma(1.0 + mu) * rgamma(1.0 + nu) * rgamma(1.0 - a))


def h_profile_series(mu: float, nu: float, q: float, t: float, x: float, xp: float,
                     ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """x^{2nu} x'^{-2(q+1)} F4(...) for x' > x + t."""
    res = appell_f4(q + 1.0, q + 1.0 + nu, 1.0 + mu, 1.0 + nu,
                    (t / xp) ** 2, (x / xp) ** 2, ctl)
    return x ** (2.0 * nu) * xp ** (-2.0 * (q + 1.0)) * res.value


def h_profile_integral(mu: float, nu: float, q: float, t: float, x: float, xp: float) -> float:
    """H through the triple-Bessel integral; valid on both sides of x + t."""
    from .quadrature import bessel_power_integral

    a = q + 1.0
    if not -nu < a < 0.75 + mu / 2.0:
        raise DomainError("triple-Bessel continuation needs -nu < q+1 < 3/4 + mu/2")
    integral = bessel_power_integral(2.0 * a - 1.0 - mu, [(mu, t), (nu, x), (nu, xp)])
    return (x * xp) ** nu * t ** (-mu) * integral / _h_integral_const(a, mu, nu)


def h_kernel(p: EPDParameters, t: float, x: float, xp: float, method: str = "auto",
             ctl: SeriesControl = DEFAULT_CONTROL) -> KernelValue:
    """H_mu(t, x, x') with phase e^{i pi q} carried by K(nu, q).

    ``method`` is "series" (F4, only for x' > x+t), "integral" (triple-Bessel
    continuation) or "auto": the series unless sqrt(X)+sqrt(Y) exceeds
    ``F4_SERIES_LIMIT``, where the double series converges too slowly.
    """
    if p.nu is None or p.q is None:
        raise DomainError("h_kernel needs nu and q")
    if not (t > 0 and x > 0 and xp > 0):
        raise DomainError("h_kernel needs t, x, x' > 0")
    if abs(xp - x - t) <= CONE_GUARD * max(1.0, xp):
        raise LightConeError("h_kernel evaluated at x' = x + t")
    region = classify_region(t, x, xp).region
    phase = cmath.exp(1j * math.pi * p.q)
    reach = (t + x) / xp
    if method == "series" or (method == "auto" and reach <= F4_SERIES_LIMIT):
        if reach >= 1.0:
            raise DomainError("F4 series needs x' > x + t")
        prof = h_profile_series(p.mu, p.nu, p.q, t, x, xp, ctl)
    elif method in ("integral", "auto"):
        prof = h_profile_integral(p.mu, p.nu, p.q, t, x, xp)
    else:
        raise ValueError(f"unknown method {method!r}")
    return KernelValue(prof, phase, region)
