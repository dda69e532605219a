"""Biorthogonal interpolation bases for periodic derivative data.

A :class:`NodeSystem` fixes points ``s_0..s_{m-1}`` and residues
``r_0..r_{m-1}``; the basis ``Lambda[n][j]`` is the unique family of
polynomials with ``Lambda[n][j]^(m*k + r_l)(s_l) = delta(j, l) * delta(n, k)``.
Everything here is exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .errors import SingularSystem
from .poly import Polynomial, falling_factorial
from .scalars import (
    ExactScalar,
    exact_abs2,
    format_exact,
    exact_det,
    exact_inverse,
    mat_vec,
    to_exact,
)


@dataclass(frozen=True)
class NodeSystem:
    """Nodes ``s`` (repetitions allowed) with derivative residues ``r``.

    Only ``0 <= r_j <= m-1`` is enforced.  Whether the boundary problem is
    solvable is decided by ``D != 0`` (see :attr:`admissible`).
    """

    s: tuple
    r: tuple

    def __post_init__(self):
        s = tuple(to_exact(v) for v in self.s)
        r = tuple(int(v) for v in self.r)
        if not s or len(s) != len(r):
            raise ValueError("need m >= 1 nodes and exactly one residue per node")
        m = len(s)
        if any(not 0 <= rj <= m - 1 for rj in r):
            raise ValueError(f"residues must lie in [0, {m - 1}], got {r}")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "r", r)

    # -- named systems -----------------------------------------------------
    @classmethod
    def lidstone(cls, s0=0, s1=1) -> "NodeSystem":
        return cls((s0, s1), (0, 0))

    @classmethod
    def whittaker(cls, s0=1, s1=0) -> "NodeSystem":
        """Even derivatives at ``s0``, odd derivatives at ``s1``."""
        return cls((s0, s1), (0, 1))

    @classmethod
    def gontcharoff(cls, s: Sequence) -> "NodeSystem":
        return cls(tuple(s), tuple(range(len(s))))

    @classmethod
    def poritsky(cls, s: Sequence) -> "NodeSystem":
        return cls(tuple(s), (0,) * len(s))

    @property
    def m(self) -> int:
        return len(self.s)

    @cached_property
    def boundary_matrix(self) -> tuple:
        """Entry ``(j, k) = k!/(k - r_j)! * s_j**(k - r_j)`` (zero when ``k < r_j``)."""
        m = self.m
        return tuple(
            tuple(
                falling_factorial(k, rj) * sj ** (k - rj) if k >= rj else Fraction(0)
                for k in range(m)
            )
            for sj, rj in zip(self.s, self.r)
        )

    @cached_property
    def D(self) -> ExactScalar:
        return exact_det(self.boundary_matrix)

    @property
    def admissible(self) -> bool:
        return self.D != 0

    @cached_property
    def _inverse(self):
        if not self.admissible:
            raise SingularSystem(f"D(s) = 0 for {self.describe()}")
        return exact_inverse(self.boundary_matrix)

    def describe(self) -> str:
        return f"s=({', '.join(format_exact(v) for v in self.s)}), r={self.r}"

    @property
    def radius(self) -> float:
        """``max |s_j|``."""
        return max(math.sqrt(float(exact_abs2(v))) for v in self.s)


def determinant_D(nodes: NodeSystem) -> ExactScalar:
    return nodes.D


def solve_boundary(nodes: NodeSystem, targets: Sequence) -> Polynomial:
    """Unique ``L`` of degree < m with ``L^(r_l)(s_l) = targets[l]``."""
    if len(targets) != nodes.m:
        raise ValueError("need one target per node")
    return Polynomial(mat_vec(nodes._inverse, [to_exact(t) for t in targets]))


def boundary_values(nodes: NodeSystem, p: Polynomial) -> list:
    """``(p^(r_l)(s_l))_l``."""
    return [p.derivative_at(rl, sl) for sl, rl in zip(nodes.s, nodes.r)]


@dataclass
class BasisTable:
    """Memoized ``Lambda[n][j]`` built by the m-fold integration recurrence.

    Rows are filled in order of ``n`` on demand; once a row exists it never
    changes.  ``anchor`` is where the m-fold primitive is pinned; the result
    does not depend on it.
    """

    nodes: NodeSystem
    anchor: object = Fraction(0)
    table: list = field(default_factory=list)

    def __post_init__(self):
        if not self.nodes.admissible:
            raise SingularSystem(f"D(s) = 0 for {self.nodes.describe()}")
        self.anchor = to_exact(self.anchor)

    @property
    def N_max(self) -> int:
        return len(self.table) - 1

    def extend(self, n_max: int) -> "BasisTable":
        nodes, m = self.nodes, self.nodes.m
        if not self.table:
            self.table.append([solve_boundary(nodes, [int(j == l) for l in range(m)])
                               for j in range(m)])
        while len(self.table) <= n_max:
            row = []
            for prev in self.table[-1]:
                L = prev.antiderivative(m, self.anchor)
                row.append(L - solve_boundary(nodes, boundary_values(nodes, L)))
            self.table.append(row)
        return self

    def __getitem__(self, nj) -> Polynomial:
        n, j = nj
        self.extend(n)
        return self.table[n][j]

    def rows(self, n_max: int):
        self.extend(n_max)
        return self.table[: n_max + 1]


def lambda_polynomial(nodes: NodeSystem, n: int, j: int, table: BasisTable | None = None) -> Polynomial:
    if table is None:
        table = BasisTable(nodes)
    return table[n, j]


def project_polynomial(nodes: NodeSystem, P: Polynomial) -> dict:
    """Coefficients ``a[(k, j)] = P^(m*k + r_j)(s_j)``; entries past deg P are dropped."""
    if not nodes.admissible:
        raise SingularSystem(f"D(s) = 0 for {nodes.describe()}")
    m = nodes.m
    out = {}
    k = 0
    while m * k <= max(P.degree, 0):
        for j, (sj, rj) in enumerate(zip(nodes.s, nodes.r)):
            out[(k, j)] = P.derivative_at(m * k + rj, sj)
        k += 1
    return out


def reconstruct_polynomial(nodes: NodeSystem, coeffs: Mapping, table: BasisTable | None = None) -> Polynomial:
    """``sum a[(k, j)] * Lambda[k][j]``."""
    if table is None:
        table = BasisTable(nodes)
    out = Polynomial()
    for (k, j), a in sorted(coeffs.items()):
        if a != 0:
            out = out + table[k, j] * a
    return out


# ---------------------------------------------------------------------------
# coefficient majorant
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThetaBound:
    theta: float
    B: float
    A: float


def _weighted_norm_ok(p: Polynomial, theta: Fraction, top: int) -> bool:
    # |coeff_i| <= theta**(top - i) / i!, compared exactly on squares
    for i, c in enumerate(p.coeffs):
        bound = theta ** (top - i) / math.factorial(i)
        if exact_abs2(c) > bound * bound:
            return False
    return True


def certify_theta(table: BasisTable, theta: float, n_max: int) -> bool:
    """Check ``|coeff_i Lambda[n][j]| <= theta**(m(n+1) - i) / i!`` for n <= n_max."""
    th = Fraction(theta)
    m = table.nodes.m
    return all(
        _weighted_norm_ok(p, th, m * (n + 1))
        for n, row in enumerate(table.rows(n_max))
        for p in row
    )


def theta_bound(nodes: NodeSystem, rel_tol: float = 1e-3) -> ThetaBound:
    """Smallest grid value ``theta >= 1`` satisfying the inductive majorant.

    ``B`` bounds the inverse boundary map in the weighted basis ``z**i/i!``:
    for targets of modulus <= 1 the solution has ``i! |coeff_i| <= B``.
    ``theta`` must dominate the ``n = 0`` row and satisfy
    ``theta >= B * A**m * exp(A/theta)`` with ``A = max(1, |s_j|)``.
    """
    table = BasisTable(nodes).extend(0)
    m = nodes.m
    A = max(1.0, nodes.radius)
    B = 0.0
    for i in range(m):
        col = sum(math.sqrt(float(exact_abs2(p[i]))) for p in table.table[0])
        B = max(B, math.factorial(i) * col)
    B = max(B, 1e-300)

    def ok(theta: float) -> bool:
        if theta < B * A ** m * math.exp(A / theta):
            return False
        th = Fraction(theta)
        return all(_weighted_norm_ok(p, th, m) for p in table.table[0])

    hi = max(1.0, B * A ** m)
    while not ok(hi):
        hi *= 2.0
    lo = 1.0
    if ok(lo):
        return ThetaBound(theta=1.0, B=B, A=A)
    while (hi - lo) > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return ThetaBound(theta=hi, B=B, A=A)
