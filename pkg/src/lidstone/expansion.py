"""Series expansions of entire functions in the periodic interpolation basis.

An entire function of type below the zero-free radius of the kernel
determinant expands as ``f = sum_{n, j} f^(mn + r_j)(s_j) Lambda[n][j]``.
This module evaluates the coefficients, estimates type and growth, builds
partial sums with a tail bound, and cross-checks coefficients against a
Laplace-type contour integral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._parallel import pmap
from .basis import BasisTable, NodeSystem, project_polynomial
from .errors import CatalogueInconsistent, TypeTooLarge
from .functions import EntireFunction, PolyFunction, is_polynomial, polynomial_degree
from .kernel import DEFAULT_SEARCH_RADIUS, DeltaProfile, KernelSystem, phi_many, zero_free_radius
from .poly import Polynomial

TYPE_WINDOW = (200, 400)
TYPE_REL_TOL = 0.05
GROWTH_RADII = tuple(range(20, 201, 20))
GROWTH_POINTS = 256
TREND_SLACK = 1.05
SUP_SAMPLES = 256
SUP_SAFETY = 1.05
C_FIT_ROWS = 10
# relative margin by which a type must undercut a computed radius
TYPE_MARGIN = 1e-9


# ---------------------------------------------------------------------------
# derivatives, type, growth
# ---------------------------------------------------------------------------

def derivative_series(f: EntireFunction, N: int, s: complex, rel_tol: float = 1e-18) -> complex:
    """``sum_k a_{N+k} s^k / k!`` summed until the majorant tail is negligible."""
    s = complex(s)
    T = max(f.declared_type, 1.0)
    w = T * s
    acc, weight, k = 0j, 1 + 0j, 0
    cap = polynomial_degree(f) - N if is_polynomial(f) else None
    while True:
        if cap is not None and k > cap:
            break
        acc += f.taylor_scaled(N + k, T) * weight
        k += 1
        weight *= w / k
        if cap is None and k > abs(w) and abs(weight) < rel_tol * max(abs(acc), 1e-300):
            break
    return acc * T ** N


def derivative_at(f: EntireFunction, N: int, s, method: str = "closed") -> complex:
    """``f^(N)(s)``; ``method="series"`` sums the Taylor series at 0 instead."""
    if method == "series":
        return derivative_series(f, N, s)
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    return complex(f.derivative(N, complex(s)))


def type_estimate(f: EntireFunction, window: tuple = TYPE_WINDOW) -> float:
    """Exponential type, with the catalogue value checked against ``|a_n|^(1/n)``."""
    T = f.declared_type
    if is_polynomial(f) or T == 0:
        return 0.0
    est = 0.0
    for n in range(window[0], window[1] + 1):
        b = abs(f.taylor_scaled(n, T))
        if b > 0:
            est = max(est, T * b ** (1.0 / n))
    if abs(est - T) > TYPE_REL_TOL * T:
        raise CatalogueInconsistent(
            f"coefficient root test gives {est:.6g}, catalogue declares {T:.6g}")
    return T


@dataclass(frozen=True)
class GrowthReport:
    lhs: float
    rhs: float
    satisfied: bool
    samples: tuple
    trend_nonincreasing: bool
    subexponential: bool


def max_modulus(f: EntireFunction, r: float, points: int = GROWTH_POINTS) -> float:
    zs = r * np.exp(2j * np.pi * np.arange(points) / points)
    best = 0.0
    for z in zs:
        try:
            best = max(best, abs(f(complex(z))))
        except OverflowError:
            return math.inf
    return best


def growth_ratio(f: EntireFunction, A: float, radii=GROWTH_RADII,
                 points: int = GROWTH_POINTS) -> GrowthReport:
    """Compare ``e^-r sqrt(r) |f|_r`` on a ladder of radii with ``e^-A / sqrt(2 pi)``.

    ``lhs`` is the value at the largest radius.  Functions of type below 1
    make the limsup zero, which is decided from the catalogue type.
    """
    if A < 0:
        raise ValueError("A must be nonnegative")
    rhs = math.exp(-A) / math.sqrt(2 * math.pi)
    samples = []
    for r in radii:
        M = max_modulus(f, r, points)
        samples.append(math.exp(math.log(M) - r + 0.5 * math.log(r)) if M > 0 else 0.0)
    trend = all(b <= TREND_SLACK * a for a, b in zip(samples, samples[1:]))
    sub = f.declared_type < 1.0
    lhs = samples[-1]
    return GrowthReport(lhs=lhs, rhs=rhs, satisfied=sub or (lhs < rhs and trend),
                        samples=tuple(samples), trend_nonincreasing=trend, subexponential=sub)


# ---------------------------------------------------------------------------
# periodic expansion
# ---------------------------------------------------------------------------

def _profile(nodes: NodeSystem, tau_f: float, search_radius, profile):
    if profile is not None:
        return profile
    R = search_radius if search_radius is not None else max(DEFAULT_SEARCH_RADIUS, 2 * tau_f + 1)
    return zero_free_radius(KernelSystem(nodes), R)


@dataclass
class ExpansionResult:
    """Coefficient table, partial sum and tail bound of a periodic expansion."""

    f: EntireFunction
    nodes: NodeSystem
    N: int
    coeffs: np.ndarray                # (rows, m); rows may exceed N + 1 for the C fit
    partial_sum: Polynomial
    tau_f: float
    tau_hat: float
    rho: float
    rho_f: float
    C: float
    table: BasisTable
    exact_coeffs: dict | None = None
    exact_partial_sum: Polynomial | None = None
    _tail_zero: bool = False
    _sup_cache: dict = field(default_factory=dict, repr=False)

    def __call__(self, z) -> complex:
        return complex(self.partial_sum(complex(z)))

    def term(self, n: int, z) -> complex:
        z = complex(z)
        return sum((complex(self.coeffs[n, j]) * complex(self.table[n, j](z))
                    for j in range(self.nodes.m)), 0j)

    def term_magnitudes(self, zs) -> np.ndarray:
        """``max_z |sum_j a_nj Lambda_nj(z)|`` for each ``n <= N``."""
        return np.array([max(abs(self.term(n, z)) for z in zs) for n in range(self.N + 1)])

    def phi_sup(self, z) -> np.ndarray:
        key = complex(z)
        if key not in self._sup_cache:
            ts = self.rho * np.exp(2j * np.pi * np.arange(SUP_SAMPLES) / SUP_SAMPLES)
            ph = phi_many(KernelSystem(self.nodes), ts, [key])[:, 0, :]
            self._sup_cache[key] = SUP_SAFETY * np.abs(ph).max(axis=0)
        return self._sup_cache[key]

    def remainder_bound(self, z) -> float:
        """Tail bound ``sum_{n > N, j} C rho_f^(mn+r_j) rho^-(mn+r_j) sup|phi_j(t, z)|``."""
        if self._tail_zero:
            return 0.0
        m = self.nodes.m
        q = self.rho_f / self.rho
        S = self.phi_sup(z)
        geo = q ** (m * (self.N + 1)) / (1 - q ** m)
        return float(sum(self.C * S[j] * q ** rj * geo for j, rj in enumerate(self.nodes.r)))


def expand_periodic(f: EntireFunction, nodes: NodeSystem, N: int, search_radius=None,
                    profile: DeltaProfile | None = None) -> ExpansionResult:
    table = BasisTable(nodes).extend(N)
    tau_f = type_estimate(f)
    prof = _profile(nodes, tau_f, search_radius, profile)
    tau_hat = prof.zero_free_radius
    if not tau_f < tau_hat * (1 - TYPE_MARGIN):
        raise TypeTooLarge(f"type {tau_f:.6g} is not below the zero-free radius {tau_hat:.6g}")
    m = nodes.m
    rows = max(N + 1, C_FIT_ROWS)
    s = [complex(v) for v in nodes.s]

    def row(n):
        return [derivative_at(f, m * n + rj, sj) for sj, rj in zip(s, nodes.r)]

    coeffs = np.array(pmap(row, range(rows)), dtype=complex)
    partial = Polynomial()
    for n in range(N + 1):
        for j in range(m):
            if coeffs[n, j] != 0:
                partial = partial + table[n, j].to_approx() * complex(coeffs[n, j])

    rho = 0.5 * (tau_f + tau_hat)
    rho_f = 0.5 * (tau_f + rho)
    C = max(abs(coeffs[n, j]) / rho_f ** (m * n + nodes.r[j])
            for n in range(C_FIT_ROWS) for j in range(m))

    exact_coeffs = exact_sum = None
    tail_zero = False
    if is_polynomial(f):
        deg = polynomial_degree(f)
        tail_zero = m * (N + 1) + min(nodes.r) > deg
        if isinstance(f, PolyFunction) and f.poly.is_exact:
            exact_coeffs = {k: v for k, v in project_polynomial(nodes, f.poly).items() if k[0] <= N}
            exact_sum = Polynomial()
            for (k, j), a in sorted(exact_coeffs.items()):
                if a != 0:
                    exact_sum = exact_sum + table[k, j] * a
    return ExpansionResult(f=f, nodes=nodes, N=N, coeffs=coeffs, partial_sum=partial,
                           tau_f=tau_f, tau_hat=tau_hat, rho=rho, rho_f=rho_f, C=float(C),
                           table=table, exact_coeffs=exact_coeffs,
                           exact_partial_sum=exact_sum, _tail_zero=tail_zero)


# ---------------------------------------------------------------------------
# contour cross-check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LaplaceCheck:
    contour_value: complex
    direct_value: complex
    residual: float
    rho: float
    terms: int


def laplace_contour_check(f: EntireFunction, nodes: NodeSystem, n: int, j: int, rho=None,
                          points: int = 2048, search_radius=None,
                          profile: DeltaProfile | None = None, cutoff: float = 1e-18) -> LaplaceCheck:
    """Recover ``f^(mn+r_j)(s_j)`` as ``(1/2 pi i) oint t^(mn+r_j) e^(t s_j) F(t) dt``.

    ``F(t) = sum a_k t^(-k-1)`` is truncated once 8 consecutive terms fall
    below ``cutoff`` on the contour.
    """
    tau_f = type_estimate(f)
    prof = _profile(nodes, tau_f, search_radius, profile)
    tau_hat = prof.zero_free_radius
    if rho is None:
        rho = 0.5 * (tau_f + tau_hat)
    if not tau_f < rho < tau_hat:
        raise TypeTooLarge(f"need type {tau_f:.6g} < rho {rho:.6g} < {tau_hat:.6g}")
    order = nodes.m * n + nodes.r[j]
    sj = complex(nodes.s[j])

    b, small = [], 0
    while small < 8 and len(b) < points // 2:
        b.append(f.taylor_scaled(len(b), rho))
        small = small + 1 if abs(b[-1]) / rho < cutoff else 0
    theta = 2 * np.pi * np.arange(points) / points
    ts = rho * np.exp(1j * theta)
    F = _kernels.horner_batch(np.array(b, dtype=complex), np.exp(-1j * theta)) / ts
    integrand = ts ** (order + 1) * np.exp(ts * sj) * F
    value = complex(integrand.mean())
    direct = derivative_at(f, order, sj)
    return LaplaceCheck(contour_value=value, direct_value=direct,
                        residual=abs(value - direct), rho=float(rho), terms=len(b))


def cauchy_bound_holds(f: EntireFunction, n: int, z0: complex, r: float, points: int = 256) -> bool:
    """``|f^(n)(z0)| r^n / n! <= |f|_{r + |z0|}`` (numerically, with 1e-9 slack)."""
    lhs = abs(derivative_at(f, n, z0)) * r ** n / math.factorial(n)
    return lhs <= max_modulus(f, r + abs(complex(z0)), points) * (1 + 1e-9)


def stirling_sandwich(N: int) -> tuple:
    """``(N^N e^-N sqrt(2 pi N), N!, N^N e^-N sqrt(2 pi N) e^(1/12N))`` as floats."""
    low = math.exp(N * math.log(N) - N + 0.5 * math.log(2 * math.pi * N))
    return low, float(math.factorial(N)), low * math.exp(1 / (12 * N))
