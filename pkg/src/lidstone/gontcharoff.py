"""Abel-Gontcharoff polynomials for a node sequence ``w_0, w_1, ...``.

``Omega[n]`` is the degree-n polynomial with ``Omega[n]^(k)(w_k) = delta(k, n)``.
Three independent constructions are provided (recurrence, bordered
determinant, iterated primitives) together with the Abel closed form for
arithmetic progressions and the interpolation series
``f = sum f^(n)(w_n) Omega[n]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DegenerateStep, RadiusOutOfRange, TypeTooLarge
from .expansion import derivative_at, type_estimate
from .functions import EntireFunction, PolyFunction, is_polynomial, polynomial_degree
from .poly import Polynomial
from .scalars import exact_abs2, exact_det, to_exact

LOG2 = math.log(2.0)
C_FIT_TERMS = 400


@dataclass(frozen=True)
class NodeSequence:
    """A total rule ``n -> w_n``.

    ``explicit``: ``values`` then ``tail`` forever.  ``periodic``: ``values``
    repeated.  ``arithmetic``: ``values = (a, t)`` giving ``a + n t``; these
    are unbounded and only meant for closed-form checks.
    """

    rule: str
    values: tuple
    tail: object = None
    A: float | None = None

    def __post_init__(self):
        if self.rule not in ("explicit", "periodic", "arithmetic"):
            raise ValueError(f"unknown rule {self.rule!r}")
        vals = tuple(to_exact(v) for v in self.values)
        if not vals:
            raise ValueError("a node sequence needs at least one value")
        object.__setattr__(self, "values", vals)
        if self.rule == "explicit":
            if self.tail is None:
                raise ValueError("explicit sequences need a tail constant")
            object.__setattr__(self, "tail", to_exact(self.tail))
        if self.rule == "arithmetic":
            if len(vals) != 2:
                raise ValueError("arithmetic sequences take (a, t)")
            object.__setattr__(self, "A", math.inf)
            return
        sup = self.sup
        A = self.A if self.A is not None else (1.01 * sup if sup > 0 else 0.01)
        if not A > sup:
            raise ValueError(f"A = {A} must exceed sup |w_n| = {sup}")
        object.__setattr__(self, "A", float(A))

    @classmethod
    def periodic(cls, cycle, A=None) -> "NodeSequence":
        return cls("periodic", tuple(cycle), None, A)

    @classmethod
    def explicit(cls, values, tail, A=None) -> "NodeSequence":
        return cls("explicit", tuple(values), tail, A)

    @classmethod
    def arithmetic(cls, a, t) -> "NodeSequence":
        return cls("arithmetic", (a, t))

    @property
    def bounded(self) -> bool:
        return self.rule != "arithmetic"

    @property
    def sup(self) -> float:
        if not self.bounded:
            return math.inf
        pool = self.values + ((self.tail,) if self.rule == "explicit" else ())
        return max(math.sqrt(float(exact_abs2(v))) for v in pool)

    def __call__(self, n: int):
        if self.rule == "periodic":
            return self.values[n % len(self.values)]
        if self.rule == "explicit":
            return self.values[n] if n < len(self.values) else self.tail
        a, t = self.values
        return a + n * t

    def prefix(self, n: int) -> list:
        return [self(k) for k in range(n)]


def _seq(w) -> NodeSequence:
    # plain lists are read as explicit sequences with a zero tail
    if isinstance(w, NodeSequence):
        return w
    return NodeSequence.explicit(tuple(w), 0)


@dataclass
class OmegaTable:
    """Memoized ``Omega[0..N]`` built by the triangular recurrence."""

    seq: NodeSequence
    omegas: list = field(default_factory=list)

    @property
    def N_max(self) -> int:
        return len(self.omegas) - 1

    def extend(self, N: int) -> "OmegaTable":
        while len(self.omegas) <= N:
            M = len(self.omegas)
            out = Polynomial.monomial(M, Fraction(1, math.factorial(M)))
            for n, om in enumerate(self.omegas):
                c = self.seq(n) ** (M - n) / math.factorial(M - n)
                if c != 0:
                    out = out - om * c
            self.omegas.append(out)
        return self

    def __getitem__(self, n: int) -> Polynomial:
        self.extend(n)
        return self.omegas[n]


def omega_recurrence(seq, N: int, table: OmegaTable | None = None) -> Polynomial:
    """``z^N/N! - sum_{n<N} w_n^(N-n)/(N-n)! Omega[n]``."""
    if table is None:
        table = OmegaTable(_seq(seq))
    return table[N]


def omega_determinant(seq, N: int) -> Polynomial:
    """``(-1)^N`` times the bordered Taylor determinant, expanded along the z row."""
    seq = _seq(seq)
    if N == 0:
        return Polynomial([1])
    w = seq.prefix(N)

    def entry(i, k):
        # row i >= 1 holds w_{i-1}^(k-i+1)/(k-i+1)! from column i-1 on
        e = k - (i - 1)
        if e < 0:
            return Fraction(0)
        return w[i - 1] ** e / math.factorial(e) if e else Fraction(1)

    rows = [[entry(i, k) for k in range(N + 1)] for i in range(1, N + 1)]
    coeffs = []
    for k in range(N + 1):
        minor = [row[:k] + row[k + 1:] for row in rows]
        cof = exact_det(minor) * (-1) ** k
        coeffs.append(cof / math.factorial(k))
    return Polynomial(coeffs) * (-1) ** N


def omega_integral(seq, N: int) -> Polynomial:
    """Iterated primitives: integrate from the last node back to ``w_0``."""
    seq = _seq(seq)
    p = Polynomial([1])
    for k in range(N - 1, -1, -1):
        p = p.antiderivative(1, seq(k))
    return p


def abel_closed_form(a, t, n: int) -> Polynomial:
    """``(z - a)(z - a - n t)^(n-1) / n!`` for the progression ``a + k t``."""
    a, t = to_exact(a), to_exact(t)
    if t == 0:
        raise DegenerateStep("the progression step t must be nonzero")
    if n == 0:
        return Polynomial([1])
    out = Polynomial([-a, 1]) * Polynomial([-a - n * t, 1]) ** (n - 1)
    return out / math.factorial(n)


def c_bound_sequence(N: int) -> np.ndarray:
    """``c_0 = 1``, ``c_n = 1/n! + sum_{k<n} c_k/(n-k)!``; majorizes ``|Omega[n]|_r / r^n``."""
    inv_fact = np.array([1.0 / math.factorial(k) if k < 171 else 0.0 for k in range(N + 1)])
    c = np.zeros(N + 1)
    c[0] = 1.0
    for n in range(1, N + 1):
        c[n] = inv_fact[n] + float(np.dot(c[:n], inv_fact[n:0:-1]))
    return c


def c_bound_exact(N: int) -> list:
    """Same recurrence in exact rationals."""
    c = [Fraction(1)]
    for n in range(1, N + 1):
        c.append(Fraction(1, math.factorial(n))
                 + sum(c[k] / math.factorial(n - k) for k in range(n)))
    return c


def kappa_threshold(kappa: float = 1.5, n_max: int = 400) -> int:
    """Smallest n0 with ``c_n < kappa^n`` for every ``n0 <= n <= n_max``."""
    c = c_bound_sequence(n_max)
    n0 = n_max + 1
    for n in range(n_max, -1, -1):
        if c[n] < kappa ** n:
            n0 = n
        else:
            break
    return n0


def _c_tail(x: float, N: int) -> float:
    # sum_{n > N} c_n x^n for 0 <= x < log 2; terms decay like (x / log 2)^n
    if x == 0:
        return 0.0
    total, n = 0.0, N + 1
    size = max(64, 2 * N + 64)
    c = c_bound_sequence(size)
    while True:
        if n > size - 1:
            size *= 2
            c = c_bound_sequence(size)
        term = c[n] * x ** n
        total += term
        n += 1
        if term <= 1e-20 * max(total, 1e-300) and n > N + 8:
            ratio = x / LOG2
            return total + term * ratio / (1 - ratio)


@dataclass
class SequenceExpansion:
    """Partial sum of ``sum f^(n)(w_n) Omega[n]`` with a bound valid on ``|z| <= r``."""

    f: EntireFunction
    seq: NodeSequence
    N: int
    r: float
    coeffs: np.ndarray
    partial_sum: Polynomial
    tail_bound: float
    tau_f: float
    c_fit: float
    table: OmegaTable
    exact_partial_sum: Polynomial | None = None

    def __call__(self, z) -> complex:
        return complex(self.partial_sum(complex(z)))


def expand_gontcharoff(f: EntireFunction, seq: NodeSequence, r: float, N: int) -> SequenceExpansion:
    """Interpolation series on the disc ``|z| <= r`` with ``A <= r < log 2 / type``.

    The tail after ``n = N`` is bounded by ``c e^(A tau) sum_{n>N} c_n (tau r)^n``
    where ``|a_M| <= c tau^M`` is fitted over the first few hundred Taylor
    coefficients.
    """
    if not seq.bounded:
        raise RadiusOutOfRange("interpolation series need a bounded node sequence")
    A = seq.A
    tau = type_estimate(f)
    if tau * A >= LOG2:
        raise TypeTooLarge(f"type {tau:.6g} is not below log 2 / A = {LOG2 / A:.6g}")
    if not (A <= r and tau * r < LOG2):
        raise RadiusOutOfRange(f"need A = {A:.6g} <= r = {r:.6g} < log 2 / type")
    table = OmegaTable(seq).extend(N)
    w = [complex(seq(n)) for n in range(N + 1)]
    coeffs = np.array([derivative_at(f, n, w[n]) for n in range(N + 1)], dtype=complex)
    partial = Polynomial()
    for n in range(N + 1):
        if coeffs[n] != 0:
            partial = partial + table[n].to_approx() * complex(coeffs[n])

    exact_sum = None
    if is_polynomial(f):
        c_fit = 0.0
        tail = 0.0 if N >= polynomial_degree(f) else math.inf
        if isinstance(f, PolyFunction) and f.poly.is_exact:
            exact_sum = Polynomial()
            for n in range(N + 1):
                d = f.poly.derivative_at(n, seq(n))
                if d != 0:
                    exact_sum = exact_sum + table[n] * d
    else:
        c_fit = max(abs(f.taylor_scaled(M, tau)) for M in range(C_FIT_TERMS + 1))
        tail = c_fit * math.exp(A * tau) * _c_tail(tau * r, N)
    return SequenceExpansion(f=f, seq=seq, N=N, r=float(r), coeffs=coeffs, partial_sum=partial,
                             tail_bound=float(tail), tau_f=tau, c_fit=float(c_fit), table=table,
                             exact_partial_sum=exact_sum)
