"""Hot numerical kernels with a compiled core and a numpy fallback.

The compiled extension is preferred; set ``LIDSTONE_PURE_PYTHON=1`` to force
the fallback.  ``BACKEND`` names the active implementation.
"""
import os

from . import _pykernels

if os.environ.get("LIDSTONE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.NAME
delta_batch = _impl.delta_batch
inverse_batch = _impl.inverse_batch
horner_batch = _impl.horner_batch


def available_backends():
    """Map of backend name to module, for benchmarks and cross-checks."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
