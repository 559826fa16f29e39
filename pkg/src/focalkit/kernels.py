"""Backend selection for the hot multiplication kernel.

The compiled extension ``focalkit._cdnative`` is preferred when importable;
otherwise the numpy fallback in ``_cdpure`` is used.  Set FOCALKIT_PURE=1 to
force the fallback (used by the benchmark and the backend-agreement tests).
"""

import os

import numpy as np

from . import _cdpure, _cdtables
from ._cdtables import FIELD_DIMS, FIELD_TAGS, conj_signs, field_dim, tables
from .errors import DomainError

try:
    from . import _cdnative
except ImportError:
    _cdnative = None

HAVE_NATIVE = _cdnative is not None


def _pick_backend():
    if os.environ.get("FOCALKIT_PURE", "") not in ("", "0"):
        return "pure"
    return "native" if HAVE_NATIVE else "pure"


_BACKEND = _pick_backend()


def backend_name():
    return _BACKEND


def set_backend(name):
    """Switch kernels at runtime ('native' or 'pure'); returns the active name."""
    global _BACKEND
    if name == "native" and not HAVE_NATIVE:
        raise DomainError("native kernel is not available in this build")
    if name not in ("native", "pure"):
        raise DomainError(f"unknown backend {name!r}")
    _BACKEND = name
    return _BACKEND


def _mul_flat(a, b, dim):
    mu, sg = tables(dim)
    out = np.zeros_like(a)
    if _BACKEND == "native":
        _cdnative.mul_batch(a, b, mu, sg, out)
    else:
        _cdpure.mul_batch(a, b, mu, sg, out)
    return out


def mul_arrays(a, b):
    """Cayley-Dickson product of coordinate arrays shaped (..., d), broadcasting."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape[-1] != b.shape[-1]:
        raise DomainError(f"algebra dimension mismatch: {a.shape[-1]} vs {b.shape[-1]}")
    d = a.shape[-1]
    lead = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
    a = np.broadcast_to(a, lead + (d,))
    b = np.broadcast_to(b, lead + (d,))
    flat_a = np.ascontiguousarray(a.reshape(-1, d))
    flat_b = np.ascontiguousarray(b.reshape(-1, d))
    return _mul_flat(flat_a, flat_b, d).reshape(lead + (d,))


def conj_arrays(a):
    """Conjugation on coordinate arrays shaped (..., d)."""
    a = np.asarray(a, dtype=np.float64)
    return a * conj_signs(a.shape[-1])


def norm_arrays(a):
    """Euclidean norm of the coordinate vector(s), shaped (...,)."""
    a = np.asarray(a, dtype=np.float64)
    return np.sqrt(np.sum(a * a, axis=-1))


__all__ = [
    "FIELD_DIMS",
    "FIELD_TAGS",
    "HAVE_NATIVE",
    "backend_name",
    "set_backend",
    "mul_arrays",
    "conj_arrays",
    "norm_arrays",
    "field_dim",
    "tables",
    "conj_signs",
]
