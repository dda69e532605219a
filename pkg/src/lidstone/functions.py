"""A closed catalogue of entire functions of exponential type.

Every entry knows its Taylor coefficients ``a_n = f^(n)(0)``, closed-form
derivatives at any point, and its exact exponential type.  Entries combine
linearly with ``+``, ``-`` and scalar ``*``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .poly import Polynomial


class EntireFunction:
    """Base class; subclasses are frozen dataclasses."""

    kind = "abstract"

    def taylor(self, n: int) -> complex:
        return self.taylor_scaled(n, 1.0)

    def taylor_scaled(self, n: int, scale: float) -> complex:
        """``a_n / scale**n``, computed without forming ``a_n`` when it would overflow."""
        raise NotImplementedError

    def derivative(self, N: int, z: complex) -> complex:
        """Closed-form ``f^(N)(z)``."""
        raise NotImplementedError

    @property
    def declared_type(self) -> float:
        raise NotImplementedError

    def __call__(self, z):
        return self.derivative(0, z)

    def terms(self):
        return ((1.0, self),)

    def __add__(self, other):
        if not isinstance(other, EntireFunction):
            return NotImplemented
        return Combination(self.terms() + other.terms())

    def __sub__(self, other):
        if not isinstance(other, EntireFunction):
            return NotImplemented
        return Combination(self.terms() + tuple((-w, g) for w, g in other.terms()))

    def __mul__(self, c):
        if isinstance(c, EntireFunction):
            return NotImplemented
        return Combination(tuple((complex(c) * w, g) for w, g in self.terms()))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / complex(c))

    def __neg__(self):
        return self * -1


def _quarter_phase(n: int, b: complex, shift_sin: bool) -> complex:
    # sin(b + n*pi/2) or cos(b + n*pi/2) with the shift reduced exactly mod 4
    k = n % 4
    if shift_sin:
        return (cmath.sin(b), cmath.cos(b), -cmath.sin(b), -cmath.cos(b))[k]
    return (cmath.cos(b), -cmath.sin(b), -cmath.cos(b), cmath.sin(b))[k]


@dataclass(frozen=True)
class PolyFunction(EntireFunction):
    poly: Polynomial
    kind = "polynomial"

    def taylor_scaled(self, n, scale):
        if n > self.poly.degree:
            return 0j
        return complex(self.poly[n]) * math.factorial(n) / scale ** n

    def derivative(self, N, z):
        return complex(self.poly.derivative_at(N, complex(z)))

    def exact_derivative(self, N, z):
        return self.poly.derivative_at(N, z)

    @property
    def declared_type(self):
        return 0.0


@dataclass(frozen=True)
class Exp(EntireFunction):
    """``exp(a z + b)``."""

    a: complex = 1.0
    b: complex = 0.0
    kind = "exp"

    def taylor_scaled(self, n, scale):
        return (self.a / scale) ** n * cmath.exp(self.b)

    def derivative(self, N, z):
        return self.a ** N * cmath.exp(self.a * z + self.b)

    @property
    def declared_type(self):
        return abs(self.a)


@dataclass(frozen=True)
class Sin(EntireFunction):
    """``sin(a z + b)``."""

    a: complex = 1.0
    b: complex = 0.0
    kind = "sin"

    def taylor_scaled(self, n, scale):
        return (self.a / scale) ** n * _quarter_phase(n, self.b, True)

    def derivative(self, N, z):
        return self.a ** N * _quarter_phase(N, self.a * z + self.b, True)

    @property
    def declared_type(self):
        return abs(self.a)


@dataclass(frozen=True)
class Cos(EntireFunction):
    """``cos(a z + b)``."""

    a: complex = 1.0
    b: complex = 0.0
    kind = "cos"

    def taylor_scaled(self, n, scale):
        return (self.a / scale) ** n * _quarter_phase(n, self.b, False)

    def derivative(self, N, z):
        return self.a ** N * _quarter_phase(N, self.a * z + self.b, False)

    @property
    def declared_type(self):
        return abs(self.a)


def _sincospi(x: complex) -> tuple:
    """``(sin(pi x), cos(pi x))`` with the real part reduced exactly, so integers give exact zeros."""
    x = complex(x)
    r = math.remainder(x.real, 2.0)
    q = round(2 * r)
    f = r - q / 2                     # |f| <= 1/4, exact
    sf, cf = math.sin(math.pi * f), math.cos(math.pi * f)
    sr, cr = ((sf, cf), (cf, -sf), (-sf, -cf), (-cf, sf))[q % 4]
    if x.imag == 0:
        return complex(sr), complex(cr)
    ch, sh = math.cosh(math.pi * x.imag), math.sinh(math.pi * x.imag)
    return complex(sr * ch, cr * sh), complex(cr * ch, -sr * sh)


@dataclass(frozen=True)
class SinPi(EntireFunction):
    """``sin(pi (a z + b))`` with real ``a, b``; zeros at rational nodes come out exact."""

    a: float = 1.0
    b: float = 0.0
    kind = "sin_pi"

    def taylor_scaled(self, n, scale):
        return (math.pi * self.a / scale) ** n * _sincospi(self.b + n / 2)[0]

    def derivative(self, N, z):
        return (math.pi * self.a) ** N * _sincospi(self.a * complex(z) + self.b + N / 2)[0]

    @property
    def declared_type(self):
        return math.pi * abs(self.a)


@dataclass(frozen=True)
class CosPi(EntireFunction):
    """``cos(pi (a z + b))`` with real ``a, b``."""

    a: float = 1.0
    b: float = 0.0
    kind = "cos_pi"

    def taylor_scaled(self, n, scale):
        return (math.pi * self.a / scale) ** n * _sincospi(self.b + n / 2)[1]

    def derivative(self, N, z):
        return (math.pi * self.a) ** N * _sincospi(self.a * complex(z) + self.b + N / 2)[1]

    @property
    def declared_type(self):
        return math.pi * abs(self.a)


@dataclass(frozen=True)
class Sinh(EntireFunction):
    """``sinh(a z + b)``."""

    a: complex = 1.0
    b: complex = 0.0
    kind = "sinh"

    def taylor_scaled(self, n, scale):
        return (self.a / scale) ** n * (cmath.sinh(self.b) if n % 2 == 0 else cmath.cosh(self.b))

    def derivative(self, N, z):
        w = self.a * z + self.b
        return self.a ** N * (cmath.sinh(w) if N % 2 == 0 else cmath.cosh(w))

    @property
    def declared_type(self):
        return abs(self.a)


@dataclass(frozen=True)
class Cosh(EntireFunction):
    """``cosh(a z + b)``."""

    a: complex = 1.0
    b: complex = 0.0
    kind = "cosh"

    def taylor_scaled(self, n, scale):
        return (self.a / scale) ** n * (cmath.cosh(self.b) if n % 2 == 0 else cmath.sinh(self.b))

    def derivative(self, N, z):
        w = self.a * z + self.b
        return self.a ** N * (cmath.cosh(w) if N % 2 == 0 else cmath.sinh(w))

    @property
    def declared_type(self):
        return abs(self.a)


@dataclass(frozen=True)
class Expm1OverZ(EntireFunction):
    """``(exp(a z) - 1) / z``, i.e. ``a * integral_0^1 exp(a z u) du``."""

    a: complex = 1.0
    kind = "expm1_over_z"

    def __post_init__(self):
        if self.a == 0:
            raise ValueError("a must be nonzero")

    def taylor_scaled(self, n, scale):
        return self.a * (self.a / scale) ** n / (n + 1)

    def derivative(self, N, z):
        # f^(N)(z) = a^(N+1) I_N(a z) with I_N(w) = integral_0^1 u^N e^{w u} du
        w = self.a * complex(z)
        if abs(w) > N + 1:
            ew = cmath.exp(w)
            I = (ew - 1) / w
            for k in range(1, N + 1):
                I = (ew - k * I) / w
        else:
            I, term, k = 0j, 1 + 0j, 0
            while True:
                inc = term / (N + k + 1)
                I += inc
                k += 1
                term *= w / k
                if k > abs(w) and abs(term) < 1e-18 * max(abs(I), 1e-300):
                    break
        return self.a ** (N + 1) * I

    @property
    def declared_type(self):
        return abs(self.a)


@dataclass(frozen=True)
class Combination(EntireFunction):
    """``sum weight_i * f_i``."""

    parts: tuple
    kind = "combination"

    def terms(self):
        return tuple((complex(w), g) for w, g in self.parts)

    def taylor_scaled(self, n, scale):
        return sum((w * g.taylor_scaled(n, scale) for w, g in self.parts), 0j)

    def derivative(self, N, z):
        return sum((w * g.derivative(N, z) for w, g in self.parts), 0j)

    @property
    def declared_type(self):
        return max((g.declared_type for w, g in self.parts if w != 0), default=0.0)


def is_polynomial(f: EntireFunction) -> bool:
    if isinstance(f, PolyFunction):
        return True
    if isinstance(f, Combination):
        return all(w == 0 or is_polynomial(g) for w, g in f.parts)
    return False


def polynomial_degree(f: EntireFunction) -> int:
    """Degree bound for a polynomial entry (-1 for zero)."""
    if isinstance(f, PolyFunction):
        return f.poly.degree
    return max((polynomial_degree(g) for w, g in f.parts if w != 0), default=-1)


def polynomial(coeffs) -> PolyFunction:
    return PolyFunction(Polynomial(coeffs))
