"""Kernel matrix ``M(t)``, its determinant, and zero-free radius analysis.

``M(t)[k, l] = zeta**(k*r_l) * exp(zeta**k * t * s_l)`` with ``zeta`` a
primitive m-th root of unity.  The inverse ``c(t) = M(t)^-1`` gives the
generating functions ``phi_j(t, z) = sum_k c[j, k] exp(zeta**k t z)`` of the
interpolation basis, valid for ``|t|`` below the first nonzero zero of
``Delta = det M``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction

import numpy as np

from . import _kernels
from .basis import NodeSystem, theta_bound
from .errors import ContourTooClose, NearSingular, NumericalError, OrderUndetermined
from .scalars import gaussian

SINGULAR_FLOOR = 1e-13
CONTOUR_FLOOR = 1e-10
DEFAULT_SEARCH_RADIUS = 8.0
DEFAULT_SAMPLES = 4096

_EXACT_ROOTS = {
    1: [Fraction(1)],
    2: [Fraction(1), Fraction(-1)],
    4: [Fraction(1), gaussian(0, 1), Fraction(-1), gaussian(0, -1)],
}


@dataclass(frozen=True)
class KernelSystem:
    """A node system together with the primitive root ``zeta = exp(2*pi*i*power/m)``."""

    nodes: NodeSystem
    power: int = 1

    def __post_init__(self):
        if math.gcd(self.power, self.m) != 1:
            raise ValueError(f"exp(2 pi i {self.power}/{self.m}) is not a primitive root")

    @property
    def m(self) -> int:
        return self.nodes.m

    @property
    def exact_zeta(self):
        roots = _EXACT_ROOTS.get(self.m)
        return None if roots is None else roots[self.power % self.m]

    def zeta_pow(self, j: int) -> complex:
        e = (j * self.power) % self.m
        roots = _EXACT_ROOTS.get(self.m)
        if roots is not None:
            return complex(roots[e])
        return cmath.exp(2j * math.pi * e / self.m)

    @property
    def zeta(self) -> complex:
        return self.zeta_pow(1)

    @cached_property
    def arrays(self):
        """(s, zeta**k, zeta**(k*r_l)) as complex arrays for the kernels."""
        m = self.m
        s = np.array([complex(v) for v in self.nodes.s], dtype=complex)
        zk = np.array([self.zeta_pow(k) for k in range(m)], dtype=complex)
        zr = np.array([[self.zeta_pow(k * rl) for rl in self.nodes.r] for k in range(m)],
                      dtype=complex)
        return s, zk, zr


def matrix_M(sys: KernelSystem, t: complex) -> np.ndarray:
    s, zk, zr = sys.arrays
    return zr * np.exp(zk[:, None] * complex(t) * s[None, :])


def delta_many(sys: KernelSystem, ts) -> np.ndarray:
    s, zk, zr = sys.arrays
    return _kernels.delta_batch(np.asarray(ts, dtype=complex), s, zk, zr)


def delta(sys: KernelSystem, t: complex) -> complex:
    """``det M(t)`` by LU with partial pivoting."""
    return complex(delta_many(sys, [t])[0])


def _hadamard(mats: np.ndarray) -> np.ndarray:
    return np.prod(np.linalg.norm(mats, axis=-1), axis=-1)


def c_matrix_many(sys: KernelSystem, ts) -> np.ndarray:
    """``M(t)^-1`` for each t; raises NearSingular if any ``M(t)`` is numerically singular."""
    ts = np.asarray(ts, dtype=complex)
    s, zk, zr = sys.arrays
    dets, inv = _kernels.inverse_batch(ts, s, zk, zr)
    mats = zr[None] * np.exp(zk[None, :, None] * ts[:, None, None] * s[None, None, :])
    ratio = np.abs(dets) / _hadamard(mats)
    bad = ~(ratio > SINGULAR_FLOOR)
    if bad.any():
        t_bad = ts[np.flatnonzero(bad)[0]]
        raise NearSingular(f"|Delta(t)| below singularity floor at t={t_bad}")
    return inv


def c_matrix(sys: KernelSystem, t: complex) -> np.ndarray:
    return c_matrix_many(sys, [t])[0]


def phi_many(sys: KernelSystem, ts, zs) -> np.ndarray:
    """``phi[a, b, j] = phi_j(ts[a], zs[b])``."""
    ts = np.asarray(ts, dtype=complex)
    zs = np.asarray(zs, dtype=complex)
    c = c_matrix_many(sys, ts)                                    # (T, j, k)
    _, zk, _ = sys.arrays
    e = np.exp(zk[None, None, :] * ts[:, None, None] * zs[None, :, None])  # (T, Z, k)
    return np.einsum("tjk,tzk->tzj", c, e)


def phi(sys: KernelSystem, j: int, t: complex, z: complex) -> complex:
    return complex(phi_many(sys, [t], [z])[0, 0, j])


def kernel_identity_residual(sys: KernelSystem, ts, zs) -> np.ndarray:
    """``|sum_j exp(t s_j) phi_j(t, z) - exp(t z)|`` on the grid ``ts x zs``."""
    ts = np.asarray(ts, dtype=complex)
    zs = np.asarray(zs, dtype=complex)
    s, _, _ = sys.arrays
    ph = phi_many(sys, ts, zs)
    lhs = np.einsum("tj,tzj->tz", np.exp(ts[:, None] * s[None, :]), ph)
    return np.abs(lhs - np.exp(ts[:, None] * zs[None, :]))


# ---------------------------------------------------------------------------
# Taylor expansion of Delta at the origin
# ---------------------------------------------------------------------------

def delta_taylor(sys: KernelSystem, order: int | None = None) -> np.ndarray:
    """Taylor coefficients of ``Delta(t)`` up to ``t**order`` (default ``m**2``).

    Each matrix entry is expanded as a truncated exponential series and the
    determinant is formed by a signed sum over column subsets, so no division
    by possibly vanishing series is needed.
    """
    m = sys.m
    K = m * m if order is None else order
    s, zk, zr = sys.arrays
    p = np.arange(K + 1)
    inv_fact = np.array([1.0 / math.factorial(int(i)) for i in p])
    entry = zr[:, :, None] * (zk[:, None, None] * s[None, :, None]) ** p[None, None, :] * inv_fact
    dp = {0: np.zeros(K + 1, dtype=complex)}
    dp[0][0] = 1.0
    for k in range(m):
        nxt = {}
        for mask, ser in dp.items():
            for l in range(m):
                if mask >> l & 1:
                    continue
                sign = -1.0 if bin(mask >> (l + 1)).count("1") % 2 else 1.0
                term = sign * np.convolve(ser, entry[k, l])[: K + 1]
                key = mask | (1 << l)
                nxt[key] = nxt[key] + term if key in nxt else term
        dp = nxt
    return dp[(1 << m) - 1]


def origin_zero_order(sys: KernelSystem, rel_threshold: float = 1e-8) -> int:
    """Multiplicity of ``t = 0`` as a zero of ``Delta``."""
    coeffs = np.abs(delta_taylor(sys))
    top = coeffs.max()
    if top == 0:
        raise OrderUndetermined("all Taylor coefficients of Delta vanish up to order m^2")
    hits = np.flatnonzero(coeffs > rel_threshold * top)
    if hits.size == 0:
        raise OrderUndetermined(f"no Taylor coefficient exceeds {rel_threshold:g} of the largest")
    return int(hits[0])


# ---------------------------------------------------------------------------
# argument principle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroCount:
    count: int
    trapezoid: float      # (1/2 pi i) \oint Delta'/Delta dt by trapezoid + central differences
    min_ratio: float      # min |Delta(t)| / Hadamard bound at t, over the contour


def _phase_winding(sys: KernelSystem, rho: float, theta: np.ndarray, vals: np.ndarray,
                   max_depth: int = 60) -> float:
    # accumulated arg(Delta) over the closed contour; arcs whose phase step
    # exceeds pi/4 are bisected until resolved
    th = np.append(theta, 2 * np.pi)
    va = np.append(vals, vals[0])
    a_th, b_th = th[:-1], th[1:]
    a_v, b_v = va[:-1], va[1:]
    total = 0.0
    for _ in range(max_depth):
        step = np.angle(b_v / a_v)
        bad = np.abs(step) > np.pi / 4
        total += step[~bad].sum()
        if not bad.any():
            return total / (2 * np.pi)
        a_th, b_th, a_v, b_v = a_th[bad], b_th[bad], a_v[bad], b_v[bad]
        mid = 0.5 * (a_th + b_th)
        m_v = delta_many(sys, rho * np.exp(1j * mid))
        a_th, b_th = np.concatenate([a_th, mid]), np.concatenate([mid, b_th])
        a_v, b_v = np.concatenate([a_v, m_v]), np.concatenate([m_v, b_v])
    raise ContourTooClose(f"phase of Delta unresolved on |t| = {rho}")


def count_zeros(sys: KernelSystem, rho: float, samples: int = DEFAULT_SAMPLES) -> ZeroCount:
    """Number of zeros of ``Delta`` (with multiplicity) inside ``|t| = rho``."""
    theta = 2 * np.pi * np.arange(samples) / samples
    ts = rho * np.exp(1j * theta)
    vals = delta_many(sys, ts)
    # local scale: Delta is exponentially lopsided on large contours, so
    # closeness to a zero is judged against the row-norm product at each t
    s, zk, zr = sys.arrays
    mats = zr[None] * np.exp(zk[None, :, None] * ts[:, None, None] * s[None, None, :])
    ratio = float(np.min(np.abs(vals) / _hadamard(mats)))
    if not ratio >= CONTOUR_FLOOR:
        raise ContourTooClose(f"|Delta| / Hadamard bound = {ratio:.3g} on |t| = {rho}")
    h = 1e-6 * rho
    dvals = (delta_many(sys, ts + h) - delta_many(sys, ts - h)) / (2 * h)
    trap = complex(np.mean(ts * dvals / vals))
    winding = _phase_winding(sys, rho, theta, vals)
    return ZeroCount(count=int(round(winding)), trapezoid=trap.real, min_ratio=ratio)


def _polish_zero(sys: KernelSystem, t0: complex, max_iter: int = 60) -> complex:
    # Newton on Delta with a central-difference derivative
    t = complex(t0)
    for _ in range(max_iter):
        h = 1e-6 * max(abs(t), 1e-3)
        v, vp, vm = delta_many(sys, [t, t + h, t - h])
        d = (vp - vm) / (2 * h)
        if d == 0:
            break
        step = v / d
        t -= step
        if abs(step) <= 1e-15 * max(abs(t), 1.0):
            break
    return t


def nearest_zero(sys: KernelSystem, rho: float, samples: int = DEFAULT_SAMPLES) -> complex:
    """Zero of ``Delta`` closest to where ``|Delta|`` is smallest on ``|t| = rho``."""
    theta = 2 * np.pi * np.arange(samples) / samples
    ts = rho * np.exp(1j * theta)
    vals = delta_many(sys, ts)
    return _polish_zero(sys, ts[int(np.argmin(np.abs(vals)))])


@dataclass(frozen=True)
class DeltaProfile:
    origin_order: int
    zero_free_radius: float
    search_radius: float
    contour_samples: int
    theta_floor: float


def zero_free_radius(sys: KernelSystem, search_radius: float = DEFAULT_SEARCH_RADIUS,
                     samples: int = DEFAULT_SAMPLES, rel_tol: float = 1e-10) -> DeltaProfile:
    """Largest ``rho <= search_radius`` with no zero of ``Delta`` in ``0 < |t| < rho``.

    Bisection on the predicate "zero count inside ``|t| = rho`` equals the
    multiplicity at the origin".  A contour passing numerically through a
    zero is resolved by Newton-polishing that zero: its modulus is then the
    radius, provided a slightly smaller contour still passes the count.
    """
    if not search_radius > 0:
        raise ValueError("search_radius must be positive")
    nu = origin_zero_order(sys)
    floor = 1.0 / theta_bound(sys.nodes).theta
    polished = []

    def good(rho: float) -> bool:
        try:
            return count_zeros(sys, rho, samples).count == nu
        except ContourTooClose:
            alpha = nearest_zero(sys, rho, samples)
            polished.append(abs(alpha))
            return abs(alpha) > rho

    def profile(rho):
        return DeltaProfile(origin_order=nu, zero_free_radius=float(rho),
                            search_radius=float(search_radius), contour_samples=samples,
                            theta_floor=floor)

    if good(search_radius):
        return profile(search_radius)
    lo = min(floor, search_radius) * (1 - 1e-6)
    for _ in range(8):
        if good(lo):
            break
        lo *= 0.5
    else:
        raise NumericalError("zero count disagrees with the origin multiplicity on small contours")
    hi = float(search_radius)
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if good(mid):
            lo = mid
        else:
            hi = mid
    # a polished zero inside the final bracket pins the radius to machine precision
    inside = [a for a in polished if lo * (1 - 1e-9) <= a <= hi * (1 + 1e-9)]
    if inside:
        return profile(min(min(inside), search_radius))
    return profile(lo)
