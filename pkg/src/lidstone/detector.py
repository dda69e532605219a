"""Integrality classifiers: when integer derivative data forces a polynomial.

Each classifier runs a fixed sequence of gates and returns a :class:`Verdict`.
A ``polynomial`` verdict always carries a certificate polynomial that has
been checked against ``f`` on sample points; failing hypotheses are reported
with the gate that failed.  Nothing here ever claims that ``f`` is
transcendental: without a certificate the answer is ``inconclusive``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .basis import BasisTable, NodeSystem
from .errors import NotFound
from .expansion import TYPE_MARGIN, derivative_at, growth_ratio, type_estimate
from .functions import EntireFunction
from .gontcharoff import LOG2, NodeSequence, OmegaTable
from .kernel import DEFAULT_SEARCH_RADIUS, KernelSystem, zero_free_radius
from .poly import Polynomial
from .scalars import exact_abs2, to_exact

CERT_POINTS = 20
CERT_TOL = 1e-8
CERT_SEED = 0
POLYA_POINTS = 64

POLYNOMIAL = "polynomial"
VIOLATED = "hypotheses_violated"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class IntegralityConfig:
    n_max: int = 40
    int_tol: float = 1e-6
    zero_tol: float = 1e-8

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be positive")
        if not 0 < self.int_tol < 0.5:
            raise ValueError("int_tol must lie in (0, 0.5)")
        if not 0 < self.zero_tol < self.int_tol:
            raise ValueError("zero_tol must be positive and below int_tol")


@dataclass(frozen=True)
class Verdict:
    outcome: str
    certificate: Polynomial | None = None
    n_cutoff: int | None = None
    reason: str | None = None
    detail: str = ""
    evidence: dict = field(default_factory=dict)

    @property
    def is_polynomial(self) -> bool:
        return self.outcome == POLYNOMIAL


def _violated(reason, detail, evidence):
    return Verdict(VIOLATED, reason=reason, detail=detail, evidence=evidence)


def _inconclusive(detail, evidence):
    return Verdict(INCONCLUSIVE, detail=detail, evidence=evidence)


# ---------------------------------------------------------------------------
# shared gates
# ---------------------------------------------------------------------------

def polya_cutoff(f: EntireFunction, A: float, n_max: int = 60, points: int = POLYA_POINTS) -> int:
    """Smallest ``n0`` with ``max_{|z|=A} |f^(n)(z)| < 1`` for all ``n0 <= n <= n_max``."""
    zs = [0j] if A == 0 else list(A * np.exp(2j * np.pi * np.arange(points) / points))
    n0 = None
    for n in range(n_max, -1, -1):
        if max(abs(derivative_at(f, n, z)) for z in zs) < 1:
            n0 = n
        else:
            break
    if n0 is None:
        raise NotFound(f"|f^({n_max})| reaches 1 on |z| = {A}")
    return n0


def _near_int(x: complex, tol: float) -> bool:
    return abs(x.imag) <= tol and abs(x.real - round(x.real)) <= tol


def _integral_start(data: Sequence, cfg: IntegralityConfig) -> int | None:
    """Smallest ``n1 <= n_max/2`` with every datum of index >= n1 near an integer."""
    n1 = None
    for n in range(len(data) - 1, -1, -1):
        if all(_near_int(complex(x), cfg.int_tol) for x in data[n]):
            n1 = n
        else:
            break
    if n1 is None or n1 > cfg.n_max // 2:
        return None
    return n1


def _snap(x: complex, tol: float):
    # exact integer when the datum is one, else keep the float
    x = complex(x)
    return to_exact(int(round(x.real))) if _near_int(x, tol) else x


def _certify(f: EntireFunction, P: Polynomial, R: float) -> float:
    rng = np.random.default_rng(CERT_SEED)
    rad = R * np.sqrt(rng.random(CERT_POINTS))
    ang = 2 * np.pi * rng.random(CERT_POINTS)
    zs = rad * np.exp(1j * ang)
    return float(max(abs(f(complex(z)) - complex(P(complex(z)))) for z in zs))


def _finish(f, P, n_cut, R, evidence) -> Verdict:
    res = _certify(f, P, R)
    evidence["certificate_residual"] = res
    evidence["certificate_radius"] = R
    if res <= CERT_TOL:
        return Verdict(POLYNOMIAL, certificate=P, n_cutoff=n_cut, evidence=evidence)
    return _inconclusive(f"certificate residual {res:.3g} exceeds {CERT_TOL}", evidence)


# ---------------------------------------------------------------------------
# periodic data f^(mn + r_j)(s_j)
# ---------------------------------------------------------------------------

def classify_periodic(f: EntireFunction, nodes: NodeSystem,
                      cfg: IntegralityConfig = IntegralityConfig(), A: float | None = None,
                      search_radius: float | None = None) -> Verdict:
    """Gates: admissibility, type, growth, integrality, then zero inference."""
    ev: dict = {"gates": []}
    if not nodes.admissible:
        return _violated("admissibility", "D(s) = 0", ev)
    ev["gates"].append("admissibility")
    m = nodes.m

    tau_f = type_estimate(f)
    R = search_radius if search_radius is not None else max(DEFAULT_SEARCH_RADIUS, 2 * tau_f + 1)
    prof = zero_free_radius(KernelSystem(nodes), R)
    ev.update(type=tau_f, zero_free_radius=prof.zero_free_radius, origin_order=prof.origin_order)
    if tau_f >= prof.zero_free_radius * (1 - TYPE_MARGIN):
        return _violated("type", f"type {tau_f:.6g} >= zero-free radius "
                                 f"{prof.zero_free_radius:.6g}", ev)
    ev["gates"].append("type")

    A = nodes.radius if A is None else float(A)
    gr = growth_ratio(f, A)
    ev.update(growth_lhs=gr.lhs, growth_rhs=gr.rhs, growth_A=A)
    if not gr.satisfied:
        return _violated("growth", "growth condition fails", ev)
    ev["gates"].append("growth")

    s = [complex(v) for v in nodes.s]
    data = [[derivative_at(f, m * n + rj, sj) for sj, rj in zip(s, nodes.r)]
            for n in range(cfg.n_max + 1)]
    n1 = _integral_start(data, cfg)
    if n1 is None:
        return _violated("integrality", "no integral tail within the examined window", ev)
    ev["integral_from"] = n1
    ev["gates"].append("integrality")

    try:
        n0 = polya_cutoff(f, A, cfg.n_max * m + m)
    except NotFound as exc:
        return _inconclusive(str(exc), ev)
    ev["polya_cutoff"] = n0
    # rows whose every order reaches n0 sit in the |f^(k)| < 1 regime
    start = max(n1, -(-(n0 - min(nodes.r)) // m))
    for n in range(start, cfg.n_max + 1):
        if any(abs(x) > cfg.zero_tol for x in data[n]):
            return _violated("integrality", f"row {n} is near-integral and below 1 "
                                            f"but not zero", ev)
    n_cut = start
    while n_cut > 0 and all(abs(x) <= cfg.zero_tol for x in data[n_cut - 1]):
        n_cut -= 1
    ev["gates"].append("zero_inference")

    table = BasisTable(nodes)
    P = Polynomial()
    for n in range(n_cut):
        for j in range(m):
            a = _snap(data[n][j], cfg.int_tol)
            if a != 0:
                P = P + table[n, j] * a
    return _finish(f, P, n_cut, max(1.0, A), ev)


# ---------------------------------------------------------------------------
# derivative data along a node sequence
# ---------------------------------------------------------------------------

def _sequence_gates(f, A, ev):
    tau = type_estimate(f)
    ev.update(type=tau, type_bound=LOG2 / A)
    if tau * A >= LOG2:
        return _violated("type", f"type {tau:.6g} >= log 2 / A = {LOG2 / A:.6g}", ev)
    ev["gates"].append("type")
    gr = growth_ratio(f, A)
    ev.update(growth_lhs=gr.lhs, growth_rhs=gr.rhs, growth_A=A)
    if not gr.satisfied:
        return _violated("growth", "growth condition fails", ev)
    ev["gates"].append("growth")
    return None


def _sequence_certificate(f, w: list, d: list, cfg, A, n1, ev) -> Verdict:
    try:
        n0 = polya_cutoff(f, A, cfg.n_max)
    except NotFound as exc:
        return _inconclusive(str(exc), ev)
    ev["polya_cutoff"] = n0
    start = max(n1, n0)
    for n in range(start, cfg.n_max + 1):
        if abs(d[n]) > cfg.zero_tol:
            return _violated("integrality", f"datum {n} is near-integral and below 1 "
                                            f"but not zero", ev)
    n_cut = start
    while n_cut > 0 and abs(d[n_cut - 1]) <= cfg.zero_tol:
        n_cut -= 1
    ev["gates"].append("zero_inference")
    table = OmegaTable(NodeSequence.explicit(w, w[-1]))
    P = Polynomial()
    for n in range(n_cut):
        a = _snap(d[n], cfg.int_tol)
        if a != 0:
            P = P + table[n] * a
    return _finish(f, P, n_cut, max(1.0, A), ev)


def classify_sequence(f: EntireFunction, seq: NodeSequence,
                      cfg: IntegralityConfig = IntegralityConfig()) -> Verdict:
    """Data ``f^(n)(w_n)`` with ``|w_n| < A``."""
    ev: dict = {"gates": []}
    if not seq.bounded:
        return _violated("admissibility", "node sequence is unbounded", ev)
    A = seq.A
    bad = _sequence_gates(f, A, ev)
    if bad is not None:
        return bad
    w = seq.prefix(cfg.n_max + 1)
    d = [derivative_at(f, n, complex(w[n])) for n in range(cfg.n_max + 1)]
    n1 = _integral_start([[x] for x in d], cfg)
    if n1 is None:
        return _violated("integrality", "no integral tail within the examined window", ev)
    ev["integral_from"] = n1
    ev["gates"].append("integrality")
    return _sequence_certificate(f, w, d, cfg, A, n1, ev)


def _subset_rule(subsets) -> Callable[[int], tuple]:
    if callable(subsets):
        return lambda n: tuple(subsets(n))
    cyc = [tuple(I) for I in subsets]
    return lambda n: cyc[n % len(cyc)]


def classify_products(f: EntireFunction, s_list: Sequence, subsets, A: float,
                      cfg: IntegralityConfig = IntegralityConfig()) -> Verdict:
    """Data ``prod_{j in I_n} f^(n)(s_j)``; ``subsets`` is a rule ``n -> I_n`` or a cycle."""
    ev: dict = {"gates": []}
    s = [to_exact(v) for v in s_list]
    rule = _subset_rule(subsets)
    sup = max(math.sqrt(float(exact_abs2(v))) for v in s)
    if not sup < A:
        return _violated("admissibility", f"max |s_j| = {sup:.6g} is not below A = {A}", ev)
    for n in range(cfg.n_max + 1):
        I = rule(n)
        if not I or any(not 0 <= j < len(s) for j in I):
            return _violated("admissibility", f"I_{n} = {I} is not a nonempty index set", ev)
    ev["gates"].append("admissibility")
    A = float(A)
    bad = _sequence_gates(f, A, ev)
    if bad is not None:
        return bad
    factors = [{j: derivative_at(f, n, complex(s[j])) for j in rule(n)}
               for n in range(cfg.n_max + 1)]
    prods = [complex(np.prod(list(fac.values()))) for fac in factors]
    n1 = _integral_start([[p] for p in prods], cfg)
    if n1 is None:
        return _violated("integrality", "no integral tail of products within the window", ev)
    ev["integral_from"] = n1
    ev["gates"].append("integrality")
    # a vanishing product means a vanishing factor: route w_n through it
    w, d = [], []
    for fac in factors:
        j = min(fac, key=lambda k: (abs(fac[k]), k))
        w.append(s[j])
        d.append(fac[j])
    return _sequence_certificate(f, w, d, cfg, A, n1, ev)
