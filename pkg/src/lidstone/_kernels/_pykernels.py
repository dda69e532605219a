"""Numpy implementations of the hot kernels.

Used when the compiled extension is unavailable or when
``LIDSTONE_PURE_PYTHON=1`` is set.  Signatures match ``_ckernels``.
"""
import numpy as np

NAME = "python"


def _kernel_matrices(ts, s, zk, zr):
    ts = np.asarray(ts, dtype=complex)
    return zr[None, :, :] * np.exp(zk[None, :, None] * ts[:, None, None] * s[None, None, :])


def delta_batch(ts, s, zk, zr):
    """det M(t) for every t in ``ts``."""
    return np.linalg.det(_kernel_matrices(ts, s, zk, zr))


def inverse_batch(ts, s, zk, zr):
    """(det M(t), M(t)^-1) for every t; singular entries get NaN inverses."""
    mats = _kernel_matrices(ts, s, zk, zr)
    dets = np.linalg.det(mats)
    inv = np.full_like(mats, np.nan)
    ok = dets != 0
    try:
        inv[ok] = np.linalg.inv(mats[ok])
    except np.linalg.LinAlgError:
        for i in np.flatnonzero(ok):
            try:
                inv[i] = np.linalg.inv(mats[i])
            except np.linalg.LinAlgError:
                dets[i] = 0
    return dets, inv


def horner_batch(coeffs, zs):
    """Evaluate sum coeffs[i] z**i at every z in ``zs``."""
    zs = np.asarray(zs, dtype=complex)
    out = np.zeros_like(zs)
    for c in np.asarray(coeffs, dtype=complex)[::-1]:
        out = out * zs + c
    return out
