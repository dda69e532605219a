"""Dense univariate polynomials over exact or approximate scalars."""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .scalars import GaussianRational, format_exact, is_exact, to_exact


def falling_factorial(a: int, b: int) -> int:
    """``a!/(a-b)!``, which is 0 when ``a < b``."""
    if a < 0 or b < 0:
        raise ValueError("falling_factorial takes nonnegative integers")
    return math.perm(a, b)


def _normalize(coeffs: Iterable) -> tuple:
    cs = list(coeffs)
    if any(not is_exact(c) for c in cs):
        cs = [complex(c) for c in cs]
        for c in cs:
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise FloatingPointError("non-finite polynomial coefficient")
    else:
        cs = [to_exact(c) for c in cs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


class Polynomial:
    """Immutable dense polynomial; ``coeffs[i]`` multiplies ``z**i``.

    Exact polynomials hold ``Fraction``/``GaussianRational`` coefficients,
    approximate ones hold ``complex``.  Mixing the two yields an approximate
    result.  The zero polynomial has no coefficients and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _normalize(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def monomial(cls, k: int, c=1) -> "Polynomial":
        return cls([0] * k + [c])

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    # -- properties --------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def scalar_kind(self) -> str:
        return "approx" if self.coeffs and isinstance(self.coeffs[0], complex) else "exact"

    @property
    def is_exact(self) -> bool:
        return self.scalar_kind == "exact"

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    # -- arithmetic --------------------------------------------------------
    @staticmethod
    def _lift(other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Rational, GaussianRational, float, complex)):
            return Polynomial([other])
        return None

    def __add__(self, other):
        q = self._lift(other)
        if q is None:
            return NotImplemented
        n = max(len(self.coeffs), len(q.coeffs))
        return Polynomial(self[i] + q[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        q = self._lift(other)
        if q is None:
            return NotImplemented
        n = max(len(self.coeffs), len(q.coeffs))
        return Polynomial(self[i] - q[i] for i in range(n))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational, GaussianRational, float, complex)):
            return Polynomial(c * other for c in self.coeffs)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, int):
            scalar = Fraction(scalar)
        return Polynomial(c / scalar for c in self.coeffs)

    def __pow__(self, k: int):
        result = Polynomial([1])
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        q = self._lift(other)
        if q is None:
            return NotImplemented
        return self.coeffs == q.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    # -- calculus ----------------------------------------------------------
    def derivative(self, k: int = 1) -> "Polynomial":
        if k == 0:
            return self
        return Polynomial(
            falling_factorial(i, k) * c for i, c in enumerate(self.coeffs) if i >= k
        )

    def antiderivative(self, k: int = 1, base=0) -> "Polynomial":
        """k-fold primitive with value and first k-1 derivatives zero at ``base``."""
        q = self
        exact = self.is_exact and is_exact(base)
        for _ in range(k):
            raised = [Fraction(0)] + [c / (Fraction(i + 1) if exact else (i + 1))
                                      for i, c in enumerate(q.coeffs)]
            q = Polynomial(raised)
            q = q - q(base)
        return q

    # -- evaluation --------------------------------------------------------
    def __call__(self, z):
        acc = Fraction(0) if self.is_exact and is_exact(z) else 0j
        if isinstance(z, int):
            z = Fraction(z)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def derivative_at(self, k: int, z):
        """``p^(k)(z)`` without materializing the derivative polynomial."""
        exact = self.is_exact and is_exact(z)
        acc = Fraction(0) if exact else 0j
        if isinstance(z, int):
            z = Fraction(z)
        for i in range(len(self.coeffs) - 1, k - 1, -1):
            acc = acc * z + falling_factorial(i, k) * self.coeffs[i]
        return acc

    def evaluate_many(self, zs) -> np.ndarray:
        """Approximate evaluation at an array of points via the compiled kernel."""
        return _kernels.horner_batch(self.to_numpy(), np.asarray(zs, dtype=complex))

    def to_numpy(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs] or [0j], dtype=complex)

    def to_approx(self) -> "Polynomial":
        return Polynomial(complex(c) for c in self.coeffs) if self.coeffs else Polynomial()

    def compose_linear(self, a, b) -> "Polynomial":
        """``p(a*z + b)``."""
        lin = Polynomial([b, a])
        out = Polynomial()
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    # -- display -----------------------------------------------------------
    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"

    def __str__(self):
        return format_polynomial(self)


def format_polynomial(p: Polynomial) -> str:
    """Coefficient form such as ``"(-1/6)z + (1/6)z^3"``; ``"0"`` for zero."""
    if p.is_zero:
        return "0"
    terms = []
    for i, c in enumerate(p.coeffs):
        if c == 0:
            continue
        cs = format_exact(c) if is_exact(c) else repr(complex(c))
        mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
        terms.append(f"({cs}){mono}")
    return " + ".join(terms)


def derivative(p: Polynomial, k: int) -> Polynomial:
    """Exact k-fold derivative."""
    return p.derivative(k)


def antiderivative_vanishing_at(p: Polynomial, k: int, base) -> Polynomial:
    """``q`` with ``q^(k) = p`` and ``q(base) = ... = q^(k-1)(base) = 0``."""
    return p.antiderivative(k, base)


def from_roots_scaled(scale, roots: Sequence) -> Polynomial:
    """``scale * prod (z - root)``."""
    out = Polynomial([scale])
    for r in roots:
        out = out * Polynomial([-r, 1])
    return out
