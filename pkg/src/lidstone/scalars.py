"""Exact Gaussian-rational scalars and small exact linear algebra.

Exact scalars are either :class:`fractions.Fraction` (purely real values) or
:class:`GaussianRational` (values with a nonzero imaginary part).  Arithmetic
on a :class:`GaussianRational` narrows back to ``Fraction`` whenever the
imaginary part cancels, so real node systems never pay for the complex path
and equality is always exact.

Approximate scalars are plain Python ``complex`` numbers.
"""
from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Sequence, Union


class GaussianRational:
    """``re + im*i`` with rational parts and ``im != 0``.

    Use :func:`gaussian` to build values; it returns a ``Fraction`` when the
    imaginary part is zero.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: Fraction, im: Fraction):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))
        if self.im == 0:
            raise ValueError("GaussianRational requires a nonzero imaginary part; use gaussian()")

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- helpers -----------------------------------------------------------
    @staticmethod
    def _parts(x):
        if isinstance(x, GaussianRational):
            return x.re, x.im
        if isinstance(x, (int, Rational)):
            return Fraction(x), Fraction(0)
        return None

    def conjugate(self):
        return gaussian(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Exact squared modulus."""
        return self.re * self.re + self.im * self.im

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return complex(self) + other if isinstance(other, (float, complex)) else NotImplemented
        return gaussian(self.re + p[0], self.im + p[1])

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return complex(self) - other if isinstance(other, (float, complex)) else NotImplemented
        return gaussian(self.re - p[0], self.im - p[1])

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return other - complex(self) if isinstance(other, (float, complex)) else NotImplemented
        return gaussian(p[0] - self.re, p[1] - self.im)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return complex(self) * other if isinstance(other, (float, complex)) else NotImplemented
        a, b = self.re, self.im
        c, d = p
        return gaussian(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return complex(self) / other if isinstance(other, (float, complex)) else NotImplemented
        c, d = p
        den = c * c + d * d
        if den == 0:
            raise ZeroDivisionError("division by exact zero")
        a, b = self.re, self.im
        return gaussian((a * c + b * d) / den, (b * c - a * d) / den)

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return other / complex(self) if isinstance(other, (float, complex)) else NotImplemented
        den = self.abs2()
        return gaussian(p[0] * self.re / den, -p[0] * self.im / den)

    def __pow__(self, k):
        if not isinstance(k, int):
            return complex(self) ** k
        if k < 0:
            return 1 / (self ** (-k))
        result: object = Fraction(1)
        base: object = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison / conversion -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return False
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return math.hypot(float(self.re), float(self.im))

    def __bool__(self):
        return True

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self):
        return format_exact(self)

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im


ExactScalar = Union[Fraction, GaussianRational]


def gaussian(re, im=0) -> ExactScalar:
    """Build an exact scalar, narrowing to ``Fraction`` when ``im == 0``."""
    im = Fraction(im)
    if im == 0:
        return Fraction(re)
    return GaussianRational(Fraction(re), im)


def is_exact(x) -> bool:
    return isinstance(x, (int, Rational, GaussianRational))


def to_exact(x) -> ExactScalar:
    """Coerce ints, Fractions, Gaussian rationals and rational strings."""
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_exact(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def to_complex(x) -> complex:
    return complex(x)


def exact_abs2(x) -> Fraction:
    if isinstance(x, GaussianRational):
        return x.abs2()
    return Fraction(x) ** 2


_RATIONAL = r"[+-]?\d+(?:/\d+)?"
_GAUSS_RE = re.compile(
    rf"^\s*(?P<re>{_RATIONAL})?\s*(?:(?P<im>[+-]\s*(?:\d+(?:/\d+)?)?)\s*\*?\s*i)?\s*$"
)


def parse_exact(text: str) -> ExactScalar:
    """Parse ``"p/q"``, ``"a+b i"`` style strings into an exact scalar.

    >>> parse_exact("-3/4")
    Fraction(-3, 4)
    >>> parse_exact("1/2+1/3i")
    GaussianRational(1/2, 1/3)
    """
    s = text.strip()
    if re.fullmatch(_RATIONAL, s):
        return Fraction(s)
    if re.fullmatch(rf"{_RATIONAL}\s*\*?\s*i", s):
        body = re.sub(r"\s*\*?\s*i$", "", s)
        return gaussian(0, Fraction(body))
    if re.fullmatch(r"[+-]?\s*i", s):
        return gaussian(0, -1 if s.startswith("-") else 1)
    m = _GAUSS_RE.match(s)
    if not m or (m.group("re") is None and m.group("im") is None):
        raise ValueError(f"cannot parse exact scalar from {text!r}")
    re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
    im_text = (m.group("im") or "").replace(" ", "")
    if im_text in ("+", ""):
        im_part = Fraction(1) if m.group("im") else Fraction(0)
    elif im_text == "-":
        im_part = Fraction(-1)
    else:
        im_part = Fraction(im_text)
    return gaussian(re_part, im_part)


def format_exact(x) -> str:
    """Canonical string for an exact scalar: ``"p/q"`` or ``"a+bi"``."""
    if isinstance(x, GaussianRational):
        re_s = "" if x.re == 0 else str(x.re)
        sign = "-" if x.im < 0 else ("+" if re_s else "")
        mag = abs(x.im)
        im_s = "" if mag == 1 else str(mag)
        return f"{re_s}{sign}{im_s}i"
    return str(Fraction(x))


# ---------------------------------------------------------------------------
# exact linear algebra (small dense matrices)
# ---------------------------------------------------------------------------

def exact_det(matrix: Sequence[Sequence]) -> ExactScalar:
    """Determinant by fraction-exact Gaussian elimination."""
    a = [[to_exact(v) for v in row] for row in matrix]
    n = len(a)
    det: ExactScalar = Fraction(1)
    for col in range(n):
        pivot = next((i for i in range(col, n) if a[i][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det = det * p
        for i in range(col + 1, n):
            if a[i][col] != 0:
                f = a[i][col] / p
                row_i, row_c = a[i], a[col]
                for k in range(col, n):
                    row_i[k] = row_i[k] - f * row_c[k]
    return det


def exact_inverse(matrix: Sequence[Sequence]) -> list[list[ExactScalar]]:
    """Gauss-Jordan inverse; raises ``ZeroDivisionError`` if singular."""
    n = len(matrix)
    a = [[to_exact(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if a[i][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [vi - f * vc for vi, vc in zip(a[i], a[col])]
    return [row[n:] for row in a]


def mat_vec(matrix, vec):
    return [sum((m * v for m, v in zip(row, vec)), Fraction(0)) for row in matrix]


def primitive_root(m: int, power: int = 1) -> complex:
    """``exp(2*pi*i*power/m)``."""
    return cmath.exp(2j * math.pi * power / m)
