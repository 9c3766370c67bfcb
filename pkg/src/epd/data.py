"""Initial-data catalog: the functions f, g fed to the solvers.

Every variant is vectorized.  Scalar variants act on 1-D coordinates;
points in R^n are passed with the coordinate on the last axis and are
accepted by ``RadialProfile`` and by ``Gaussian``/``Bump`` with a vector
centre.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError

MAX_POLY_DEGREE = 16
# Gaussian tails beyond this many widths are below 1e-35 relative
_GAUSS_REACH = 9.0


class DataFunction:
    """Base class for initial data."""

    #: True when the function is identically zero
    is_zero = False

    def __call__(self, y):
        raise NotImplementedError

    def support(self) -> tuple[float, float] | None:
        """Interval hull of the (effective) support in 1-D, None if unbounded."""
        return None

    def breakpoints(self) -> tuple[float, ...]:
        """Points where the function is not smooth."""
        return ()

    def taylor_at_zero(self, count: int) -> np.ndarray:
        """First ``count`` Maclaurin coefficients."""
        raise DomainError(f"{type(self).__name__} has no Taylor expansion helper")

    def literal(self) -> str:
        raise DomainError(f"{type(self).__name__} has no CLI literal")


def _dist(y, center):
    y = np.asarray(y, dtype=float)
    c = np.asarray(center, dtype=float)
    if c.ndim == 0:
        return np.abs(y - c)
    return np.linalg.norm(y - c, axis=-1)


@dataclass(frozen=True)
class Zero(DataFunction):
    is_zero = True

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        return np.zeros(y.shape)

    def support(self):
        return (0.0, 0.0)

    def taylor_at_zero(self, count):
        return np.zeros(count)

    def literal(self):
        return "zero"


@dataclass(frozen=True)
class Polynomial(DataFunction):
    """sum_l coeffs[l] y^l on the real line."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(v) for v in self.coeffs)
        if not c:
            c = (0.0,)
        if len(c) - 1 > MAX_POLY_DEGREE:
            raise DomainError(f"polynomial degree {len(c) - 1} exceeds {MAX_POLY_DEGREE}")
        if not all(math.isfinite(v) for v in c):
            raise DomainError("polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @property
    def is_zero(self):  # type: ignore[override]
        return all(v == 0.0 for v in self.coeffs)

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        return np.polynomial.polynomial.polyval(y, self.coeffs)

    def taylor_at_zero(self, count):
        out = np.zeros(count)
        k = min(count, len(self.coeffs))
        out[:k] = self.coeffs[:k]
        return out

    def literal(self):
        return "poly:" + ",".join(repr(v) for v in self.coeffs)


@dataclass(frozen=True)
class Gaussian(DataFunction):
    """amplitude * exp(-|y - center|^2 / width^2)."""

    amplitude: float
    center: float | tuple[float, ...]
    width: float

    def __post_init__(self):
        if not self.width > 0:
            raise DomainError("Gaussian width must be positive")
        if np.ndim(self.center) > 0:
            object.__setattr__(self, "center", tuple(float(v) for v in self.center))

    def __call__(self, y):
        d = _dist(y, self.center)
        return self.amplitude * np.exp(-(d / self.width) ** 2)

    def support(self):
        if np.ndim(self.center) > 0:
            return None
        r = _GAUSS_REACH * self.width
        return (self.center - r, self.center + r)

    def taylor_at_zero(self, count):
        if np.ndim(self.center) > 0 or self.center != 0.0:
            raise DomainError("Taylor helper only for a Gaussian centred at 0")
        out = np.zeros(count)
        for k in range(0, (count + 1) // 2):
            if 2 * k < count:
                out[2 * k] = self.amplitude * (-1) ** k / math.factorial(k) / self.width ** (2 * k)
        return out

    def literal(self):
        if np.ndim(self.center) > 0:
            raise DomainError("vector-centred Gaussian has no CLI literal")
        return f"gauss:{self.amplitude!r},{self.center!r},{self.width!r}"


@dataclass(frozen=True)
class Bump(DataFunction):
    """exp(1 - 1/(1 - rho^2)) for rho = |y - center|/radius < 1, else 0.

    Normalized to 1 at the centre and C-infinity everywhere.
    """

    center: float | tuple[float, ...]
    radius: float
    amplitude: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError("Bump radius must be positive")
        if np.ndim(self.center) > 0:
            object.__setattr__(self, "center", tuple(float(v) for v in self.center))

    def __call__(self, y):
        rho2 = (_dist(y, self.center) / self.radius) ** 2
        inside = rho2 < 1.0
        vals = np.exp(1.0 - 1.0 / (1.0 - np.where(inside, rho2, 0.0)))
        return np.where(inside, self.amplitude * vals, 0.0)

    def support(self):
        if np.ndim(self.center) > 0:
            return None
        return (self.center - self.radius, self.center + self.radius)

    def breakpoints(self):
        if np.ndim(self.center) > 0:
            return ()
        return (self.center - self.radius, self.center + self.radius)

    def literal(self):
        if np.ndim(self.center) > 0 or self.amplitude != 1.0:
            raise DomainError("only unit scalar bumps have a CLI literal")
        return f"bump:{self.center!r},{self.radius!r}"


@dataclass(frozen=True)
class Tabulated(DataFunction):
    """Cubic spline through (knots, values); zero outside the knot range."""

    knots: tuple[float, ...]
    values: tuple[float, ...]
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        k = np.asarray(self.knots, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if k.ndim != 1 or k.shape != v.shape or k.size < 2:
            raise DomainError("Tabulated needs matching 1-D knots and values (>= 2)")
        if np.any(np.diff(k) <= 0):
            raise DomainError("Tabulated knots must be strictly increasing")
        object.__setattr__(self, "knots", tuple(k))
        object.__setattr__(self, "values", tuple(v))
        object.__setattr__(self, "_spline", CubicSpline(k, v))

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        inside = (y >= self.knots[0]) & (y <= self.knots[-1])
        return np.where(inside, self._spline(np.clip(y, self.knots[0], self.knots[-1])), 0.0)

    def support(self):
        return (self.knots[0], self.knots[-1])

    def breakpoints(self):
        return self.knots


@dataclass(frozen=True)
class RadialProfile(DataFunction):
    """inner(|y - center|) for points y in R^n."""

    inner: DataFunction
    center: tuple[float, ...] | float = 0.0

    def __post_init__(self):
        if np.ndim(self.center) > 0:
            object.__setattr__(self, "center", tuple(float(v) for v in self.center))

    @property
    def is_zero(self):  # type: ignore[override]
        return self.inner.is_zero

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        if np.ndim(self.center) == 0:
            # a scalar centre treats 1-D input as a batch of scalar coordinates
            if y.ndim <= 1:
                return self.inner(np.abs(y - self.center))
            return self.inner(np.linalg.norm(y - self.center, axis=-1))
        return self.inner(np.linalg.norm(y - np.asarray(self.center), axis=-1))

    def support(self):
        s = self.inner.support()
        if s is None or np.ndim(self.center) > 0:
            return None
        r = max(abs(s[0]), abs(s[1]))
        return (self.center - r, self.center + r)

    def radius_bound(self) -> float | None:
        s = self.inner.support()
        return None if s is None else max(abs(s[0]), abs(s[1]))


ZERO = Zero()


@dataclass(frozen=True)
class CauchyData:
    """The pair (f, g): initial value and weighted initial velocity."""

    f: DataFunction = ZERO
    g: DataFunction = ZERO

    def scaled(self, factor: float) -> "CauchyData":
        return CauchyData(_Scaled(self.f, factor), _Scaled(self.g, factor))


@dataclass(frozen=True)
class _Scaled(DataFunction):
    base: DataFunction
    factor: float

    @property
    def is_zero(self):  # type: ignore[override]
        return self.base.is_zero or self.factor == 0.0

    def __call__(self, y):
        return self.factor * self.base(y)

    def support(self):
        return self.base.support()

    def breakpoints(self):
        return self.base.breakpoints()


@dataclass(frozen=True)
class Sum(DataFunction):
    """Pointwise sum of data functions."""

    parts: tuple[DataFunction, ...]

    @property
    def is_zero(self):  # type: ignore[override]
        return all(p.is_zero for p in self.parts)

    def __call__(self, y):
        return sum(p(y) for p in self.parts)

    def support(self):
        sups = [p.support() for p in self.parts if not p.is_zero]
        if not sups:
            return (0.0, 0.0)
        if any(s is None for s in sups):
            return None
        return (min(s[0] for s in sups), max(s[1] for s in sups))

    def breakpoints(self):
        return tuple(sorted({b for p in self.parts for b in p.breakpoints()}))


@dataclass(frozen=True)
class SeriesCoefficients:
    """Truncated power-series data f = sum a_l x^l, g = sum b_l x^l."""

    a: tuple[float, ...] = (0.0,)
    b: tuple[float, ...] = (0.0,)

    def __post_init__(self):
        a = tuple(float(v) for v in self.a) or (0.0,)
        b = tuple(float(v) for v in self.b) or (0.0,)
        if not all(math.isfinite(v) for v in a + b):
            raise DomainError("series coefficients must be finite")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def L(self) -> int:
        return max(len(self.a), len(self.b)) - 1

    def as_cauchy_data(self) -> CauchyData:
        return CauchyData(Polynomial(self.a), Polynomial(self.b))


def parse_data(text: str) -> DataFunction:
    """Parse a CLI data literal: ``poly:c0,c1,..``, ``gauss:amp,center,width``,
    ``bump:center,radius`` or ``zero``."""
    text = text.strip()
    if text == "zero":
        return ZERO
    kind, _, rest = text.partition(":")
    try:
        nums = [float(v) for v in rest.split(",")] if rest.strip() else []
    except ValueError as exc:
        raise DomainError(f"bad number in data literal {text!r}") from exc
    if kind == "poly":
        return Polynomial(tuple(nums))
    if kind == "gauss":
        if len(nums) != 3:
            raise DomainError("gauss literal needs amp,center,width")
        return Gaussian(*nums)
    if kind == "bump":
        if len(nums) != 2:
            raise DomainError("bump literal needs center,radius")
        return Bump(nums[0], nums[1])
    raise DomainError(f"unknown data literal {text!r}")


def parse_coefficients(text: str | Sequence[float]) -> tuple[float, ...]:
    if isinstance(text, str):
        try:
            return tuple(float(v) for v in text.split(",") if v.strip())
        except ValueError as exc:
            raise DomainError(f"bad coefficient list {text!r}") from exc
    return tuple(float(v) for v in text)
