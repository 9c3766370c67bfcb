"""Scalar and array special functions used by the kernels.

Gamma/Beta come from the standard library's Lanczos implementation; the
hypergeometric, Appell, Bessel and Legendre routines are implemented here
with explicit truncation control so callers can see how a value was
obtained.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoConvergence, PoleError

__all__ = [
    "SeriesControl",
    "HyperResult",
    "gamma_fn",
    "rgamma",
    "lgamma_sign",
    "beta_fn",
    "pochhammer",
    "gauss_2f1",
    "hyp2f1",
    "appell_f4",
    "bessel_j",
    "bessel_j_scaled",
    "bessel_y",
    "hankel_coefficients",
    "legendre_p",
    "legendre_q",
]

# crossover between the ascending series and the Hankel expansion
BESSEL_SERIES_MAX = 12.0
_INT_EPS = 1e-9


@dataclass(frozen=True)
class SeriesControl:
    """Truncation control for hypergeometric series."""

    tol: float = 1e-12
    max_terms: int = 10_000

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT_CONTROL = SeriesControl()


@dataclass(frozen=True)
class HyperResult:
    value: float | complex
    terms_used: int
    converged: bool
    est_error: float

    def __float__(self):
        return float(self.value.real if isinstance(self.value, complex) else self.value)


def _is_nonpos_int(x: float) -> bool:
    return x <= 0 and abs(x - round(x)) < _INT_EPS


# --------------------------------------------------------------------------
# Gamma family
# --------------------------------------------------------------------------

def gamma_fn(x: float) -> float:
    """Gamma function with a PoleError at the non-positive integers."""
    x = float(x)
    if _is_nonpos_int(x):
        raise PoleError(f"Gamma has a pole at {x}")
    return math.gamma(x)


def rgamma(x: float) -> float:
    """Reciprocal Gamma, continued by zero at the poles."""
    x = float(x)
    if _is_nonpos_int(x):
        return 0.0
    if x > 171.0:
        return math.exp(-math.lgamma(x))
    return 1.0 / math.gamma(x)


def lgamma_sign(x: float) -> tuple[float, float]:
    """Return (log|Gamma(x)|, sign Gamma(x))."""
    x = float(x)
    if _is_nonpos_int(x):
        raise PoleError(f"Gamma has a pole at {x}")
    if x > 0:
        return math.lgamma(x), 1.0
    sign = -1.0 if math.floor(-x) % 2 == 0 else 1.0
    return math.lgamma(x), sign


def beta_fn(a: float, b: float) -> float:
    """Euler Beta function, evaluated through log-Gamma."""
    la, sa = lgamma_sign(a)
    lb, sb = lgamma_sign(b)
    lab, sab = lgamma_sign(a + b)
    return sa * sb * sab * math.exp(la + lb - lab)


def pochhammer(a: float, k: int) -> float:
    """Rising factorial (a)_k."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = 1.0
    for j in range(k):
        out *= a + j
    return out


# --------------------------------------------------------------------------
# Gauss 2F1
# --------------------------------------------------------------------------

def _terminating_degree(a: float, b: float) -> int | None:
    degs = [int(round(-v)) for v in (a, b) if _is_nonpos_int(v)]
    return min(degs) if degs else None


def _series_2f1(a, b, c, z, tol, max_terms):
    """Direct Maclaurin summation; z is an array with |z| < 1 (or terminating)."""
    z = np.asarray(z, dtype=float)
    total = np.ones_like(z)
    term = np.ones_like(z)
    az = np.minimum(np.abs(z), 0.999999)
    stop = np.maximum(tol * (1.0 - az) * 0.1, 1e-17)
    deg = _terminating_degree(a, b)
    n_used = 0
    quiet = np.zeros(z.shape, dtype=bool)
    for n in range(max_terms):
        term = term * ((a + n) * (b + n) / ((c + n) * (n + 1.0))) * z
        total = total + term
        n_used = n + 1
        if deg is not None and n + 1 >= deg:
            return total, n_used, np.zeros_like(z), True
        small = np.abs(term) <= stop * np.abs(total)
        done = small & quiet
        quiet = small
        if done.all():
            err = np.abs(term) * az / (1.0 - az)
            return total, n_used, err, True
    err = np.abs(term) * az / (1.0 - az)
    return total, n_used, err, False


def _gauss_sum(a, b, c):
    return gamma_fn(c) * gamma_fn(c - a - b) * rgamma(c - a) * rgamma(c - b)


def _connection_1mz(a, b, c, z, tol, max_terms):
    """z -> 1-z connection formula; requires c-a-b non-integer."""
    s = c - a - b
    w = 1.0 - z
    A = gamma_fn(c) * gamma_fn(s) * rgamma(c - a) * rgamma(c - b)
    B = gamma_fn(c) * gamma_fn(-s) * rgamma(a) * rgamma(b)
    v1, n1, e1, ok1 = _hyp2f1_real(a, b, 1.0 - s, w, tol, max_terms)
    v2, n2, e2, ok2 = _hyp2f1_real(c - a, c - b, 1.0 + s, w, tol, max_terms)
    ws = np.power(w, s)
    val = A * v1 + B * ws * v2
    err = abs(A) * e1 + abs(B) * ws * e2
    return val, max(n1, n2), err, ok1 and ok2


def _hyp2f1_real(a, b, c, z, tol, max_terms):
    z = np.asarray(z, dtype=float)
    if _is_nonpos_int(c) and _terminating_degree(a, b) is None:
        raise PoleError(f"2F1 with c={c} a non-positive integer")
    deg = _terminating_degree(a, b)
    if deg is not None:
        if _is_nonpos_int(c) and -c < deg:
            raise PoleError(f"2F1 with c={c}: series hits a zero denominator")
        return _series_2f1(a, b, c, z, tol, max_terms)
    if np.any(z > 1.0):
        raise DomainError("2F1 argument > 1 is outside the supported real domain")

    val = np.empty_like(z)
    err = np.zeros_like(z)
    nmax = 0
    ok = True
    at_one = z == 1.0
    pfaff = z < -0.5
    near_one = (z > 0.9) & ~at_one
    direct = ~(at_one | pfaff | near_one)

    if at_one.any():
        if not c - a - b > 0:
            raise DomainError("2F1 diverges at z=1 unless c-a-b > 0")
        val[at_one] = _gauss_sum(a, b, c)
    if direct.any():
        v, n, e, k = _series_2f1(a, b, c, z[direct], tol, max_terms)
        val[direct], err[direct] = v, e
        nmax, ok = max(nmax, n), ok and k
    if pfaff.any():
        zz = z[pfaff]
        w = zz / (zz - 1.0)
        pref = np.power(1.0 - zz, -a)
        v, n, e, k = _hyp2f1_real(a, c - b, c, w, tol, max_terms)
        val[pfaff], err[pfaff] = pref * v, pref * e
        nmax, ok = max(nmax, n), ok and k
    if near_one.any():
        zz = z[near_one]
        s = c - a - b
        if abs(s - round(s)) < 1e-7:
            # integer c-a-b: symmetric offsets in c, Richardson-combined
            def avg(eps):
                v1, n1, e1, k1 = _connection_1mz(a, b, c + eps, zz, tol, max_terms)
                v2, n2, e2, k2 = _connection_1mz(a, b, c - eps, zz, tol, max_terms)
                return 0.5 * (v1 + v2), max(n1, n2), 0.5 * (e1 + e2), k1 and k2
            va, n, e, k = avg(1e-4)
            vb, _, _, kb = avg(2e-4)
            v = (4.0 * va - vb) / 3.0
            e = e + 1e-11 * np.abs(v)
            k = k and kb
        else:
            v, n, e, k = _connection_1mz(a, b, c, zz, tol, max_terms)
        val[near_one], err[near_one] = v, e
        nmax, ok = max(nmax, n), ok and k
    return val, nmax, err, ok


def hyp2f1(a: float, b: float, c: float, z, ctl: SeriesControl = DEFAULT_CONTROL):
    """Array-friendly 2F1 for real arguments; raises NoConvergence on failure."""
    scalar = np.ndim(z) == 0
    v, _, _, ok = _hyp2f1_real(float(a), float(b), float(c), np.atleast_1d(z), ctl.tol, ctl.max_terms)
    if not ok:
        raise NoConvergence(f"2F1({a},{b},{c},z) exceeded {ctl.max_terms} terms")
    return float(v[0]) if scalar else v


def gauss_2f1(a: float, b: float, c: float, z: float,
              ctl: SeriesControl = DEFAULT_CONTROL) -> HyperResult:
    """Gauss hypergeometric function with a transformation ladder.

    Direct series on [-0.5, 0.9], Pfaff below -0.5, the 1-z connection
    formula on (0.9, 1), Gauss' closed form at z = 1.
    """
    v, n, e, ok = _hyp2f1_real(float(a), float(b), float(c), np.atleast_1d(float(z)),
                               ctl.tol, ctl.max_terms)
    if not ok:
        raise NoConvergence(f"2F1({a},{b},{c},{z}) exceeded {ctl.max_terms} terms")
    return HyperResult(float(v[0]), int(n), True, float(e[0]))


# --------------------------------------------------------------------------
# Appell F4
# --------------------------------------------------------------------------

def _log_poch(a: float, n: int):
    """log|(a)_k| and sign for k = 0..n-1."""
    vals = a + np.arange(n - 1, dtype=float)
    with np.errstate(divide="ignore"):
        logs = np.concatenate(([0.0], np.cumsum(np.log(np.abs(vals)))))
    signs = np.concatenate(([1.0], np.cumprod(np.sign(vals))))
    return logs, signs


def appell_f4(a: float, b: float, c: float, d: float, x: float, y: float,
              ctl: SeriesControl = DEFAULT_CONTROL) -> HyperResult:
    """Appell F4 summed along anti-diagonals m + n = s.

    ``terms_used`` counts diagonals.  The tail after diagonal s is bounded
    geometrically from the ratio of successive diagonal sums.
    """
    if _is_nonpos_int(c) or _is_nonpos_int(d):
        raise PoleError("F4 with c or d a non-positive integer")
    if not math.sqrt(abs(x)) + math.sqrt(abs(y)) < 1.0:
        raise DomainError(f"F4 outside convergence region: sqrt|x|+sqrt|y| = "
                          f"{math.sqrt(abs(x)) + math.sqrt(abs(y)):.6g} >= 1")
    if x == 0.0 and y == 0.0:
        return HyperResult(1.0, 1, True, 0.0)

    cap = ctl.max_terms + 1
    block = 256
    total = 1.0
    prev = 1.0
    ratios: list[float] = []
    lx = math.log(abs(x)) if x != 0 else -np.inf
    ly = math.log(abs(y)) if y != 0 else -np.inf
    sx = -1.0 if x < 0 else 1.0
    sy = -1.0 if y < 0 else 1.0
    size = 0
    for s in range(1, cap):
        if s >= size:
            size = min(cap + 1, max(2 * size, block))
            la, sa = _log_poch(a, size)
            lb, sb = _log_poch(b, size)
            lc, sc = _log_poch(c, size)
            ld, sd = _log_poch(d, size)
            idx = np.arange(size, dtype=float)
            lfact = np.concatenate(([0.0], np.cumsum(np.log(np.maximum(idx[1:], 1.0)))))
            with np.errstate(invalid="ignore"):
                rx = np.where(idx == 0, 0.0, idx * lx) - lc - lfact
                ry = np.where(idx == 0, 0.0, idx * ly) - ld - lfact
            gx = sc * np.where(idx % 2 == 1, sx, 1.0)
            gy = sd * np.where(idx % 2 == 1, sy, 1.0)
        ps = sa[s] * sb[s]
        if ps == 0.0:
            return HyperResult(total, s, True, 0.0)
        m = np.arange(s + 1)
        n = s - m
        logs = la[s] + lb[s] + rx[m] + ry[n]
        diag = float(np.sum(ps * gx[m] * gy[n] * np.exp(logs)))
        total += diag
        cur = abs(diag)
        if prev > 0:
            ratios.append(cur / prev)
        prev = cur
        if cur == 0.0 and s > 2:
            return HyperResult(total, s, True, 0.0)
        if s >= 4:
            r = max(ratios[-4:])
            scale = max(1.0, abs(total))
            if r < 1.0:
                tail = cur * r / (1.0 - r)
                if tail <= 0.01 * ctl.tol * scale:
                    return HyperResult(total, s, True, tail)
            elif s > 200 and min(ratios[-20:]) >= 1.0:
                raise NoConvergence("F4 diagonal sums stopped decreasing")
    raise NoConvergence(f"F4 exceeded {ctl.max_terms} diagonals")


# --------------------------------------------------------------------------
# Bessel functions
# --------------------------------------------------------------------------

def hankel_coefficients(order: float, count: int = 40) -> np.ndarray:
    """a_k(order) of the Hankel expansion, k = 0..count-1."""
    mu = 4.0 * order * order
    a = np.empty(count)
    a[0] = 1.0
    for k in range(1, count):
        a[k] = a[k - 1] * (mu - (2 * k - 1) ** 2) / (k * 8.0)
    return a


def _hankel_pq(order: float, z: np.ndarray):
    """P, Q of the Hankel expansion, truncated at the smallest term."""
    # terms bottom out near k = 2z, so the smallest argument sets the length
    count = int(min(40, max(12, 2.0 * float(np.min(z)) + 2))) if z.size else 1
    coeffs = hankel_coefficients(order, count)
    k = np.arange(coeffs.size)[:, None]
    terms = coeffs[:, None] / np.power(z[None, :], k)
    cut = np.argmin(np.abs(terms), axis=0)
    terms = np.where(k <= cut[None, :], terms, 0.0)
    sgn = np.array([1.0, 1.0, -1.0, -1.0])[k % 4]
    p = np.sum(np.where(k % 2 == 0, sgn * terms, 0.0), axis=0)
    q = np.sum(np.where(k % 2 == 1, sgn * terms, 0.0), axis=0)
    return p, q


def bessel_j_scaled(order: float, z) -> np.ndarray:
    """J_order(z) / (z/2)^order from the ascending series (entire in z)."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    q = -0.25 * z * z
    term = np.full_like(z, rgamma(order + 1.0))
    total = term.copy()
    k = 0
    while True:
        k += 1
        term = term * q / (k * (k + order))
        total = total + term
        if k > 5 and np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(total), 1e-300)):
            break
        if k > 400:
            break
    return total


def _bessel_j_array(order: float, z: np.ndarray) -> np.ndarray:
    if order < 0 and abs(order - round(order)) < _INT_EPS:
        n = int(round(-order))
        return (-1.0) ** n * _bessel_j_array(float(n), z)
    out = np.empty_like(z)
    small = z <= BESSEL_SERIES_MAX
    if small.any():
        zs = z[small]
        with np.errstate(divide="ignore"):
            pref = np.power(0.5 * zs, order)
        out[small] = pref * bessel_j_scaled(order, zs)
    if (~small).any():
        zl = z[~small]
        p, q = _hankel_pq(order, zl)
        chi = zl - (0.5 * order + 0.25) * np.pi
        out[~small] = np.sqrt(2.0 / (np.pi * zl)) * (p * np.cos(chi) - q * np.sin(chi))
    return out


def bessel_j(order: float, z):
    """Bessel function of the first kind for real order and z >= 0."""
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(zz < 0):
        raise DomainError("bessel_j requires z >= 0")
    out = _bessel_j_array(float(order), zz)
    return float(out[0]) if scalar else out


def _bessel_y_nonint(order: float, z: np.ndarray) -> np.ndarray:
    s = math.sin(math.pi * order)
    return (_bessel_j_array(order, z) * math.cos(math.pi * order)
            - _bessel_j_array(-order, z)) / s


def bessel_y(order: float, z):
    """Bessel function of the second kind for z > 0."""
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(zz <= 0):
        raise DomainError("bessel_y requires z > 0")
    order = float(order)
    out = np.empty_like(zz)
    small = zz <= BESSEL_SERIES_MAX
    if small.any():
        zs = zz[small]
        if abs(order - round(order)) < 1e-6:
            # integer order: symmetric offsets, Richardson-combined
            n = round(order)
            def avg(eps):
                return 0.5 * (_bessel_y_nonint(n + eps, zs) + _bessel_y_nonint(n - eps, zs))
            out[small] = (4.0 * avg(1e-3) - avg(2e-3)) / 3.0
        else:
            out[small] = _bessel_y_nonint(order, zs)
    if (~small).any():
        zl = zz[~small]
        p, q = _hankel_pq(order, zl)
        chi = zl - (0.5 * order + 0.25) * np.pi
        out[~small] = np.sqrt(2.0 / (np.pi * zl)) * (p * np.sin(chi) + q * np.cos(chi))
    return float(out[0]) if scalar else out


# --------------------------------------------------------------------------
# Associated Legendre functions
# --------------------------------------------------------------------------

def _real_if_possible(v: complex):
    if abs(v.imag) <= 1e-15 * max(1.0, abs(v.real)):
        return float(v.real)
    return v


def legendre_p(mu: float, nu: float, z: float, ctl: SeriesControl = DEFAULT_CONTROL):
    """P^mu_nu(z) from its 2F1 representation, valid for |z - 1| < 2.

    Real for -1 < z < 1; for 1 < z < 3 the ratio (1+z)/(1-z) is negative and
    the principal power makes the result complex.
    """
    if not abs(z - 1.0) < 2.0:
        raise DomainError("legendre_p requires |z-1| < 2")
    if _is_nonpos_int(1.0 - mu):
        raise PoleError("legendre_p requires 1-mu off the Gamma poles")
    if z == 1.0:
        if mu == 0:
            return 1.0
        raise DomainError("legendre_p singular at z=1 for mu != 0")
    f = gauss_2f1(-nu, nu + 1.0, 1.0 - mu, (1.0 - z) / 2.0, ctl).value
    ratio = complex((1.0 + z) / (1.0 - z))
    val = rgamma(1.0 - mu) * ratio ** (mu / 2.0) * f if mu != 0 else complex(f)
    return _real_if_possible(complex(val))


def legendre_q(mu: float, nu: float, z: float, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """Q^mu_nu(z) for z > 1, including the e^{i pi mu} phase."""
    if not z > 1.0:
        raise DomainError("legendre_q requires z > 1")
    pref = (math.sqrt(math.pi) * gamma_fn(nu + mu + 1.0)
            / (2.0 ** (nu + 1.0) * gamma_fn(nu + 1.5)))
    f = gauss_2f1((nu + mu) / 2.0 + 1.0, (nu + mu + 1.0) / 2.0, nu + 1.5, 1.0 / (z * z), ctl).value
    mag = pref * (z * z - 1.0) ** (mu / 2.0) * z ** (-nu - mu - 1.0) * f
    return complex(np.exp(1j * math.pi * mu) * mag)
