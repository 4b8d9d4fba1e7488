"""Kernel backend selection.

``ENTEVO_BACKEND=numba`` (default when numba imports) compiles the hot loops
in :mod:`entevo._kernels`; ``ENTEVO_BACKEND=numpy`` routes every call to the
vectorised LAPACK-backed fallbacks instead.
"""
import os

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAS_NUMBA = False


def _resolve():
    requested = os.environ.get("ENTEVO_BACKEND", "").strip().lower()
    if requested in ("", "auto"):
        return "numba" if HAS_NUMBA else "numpy"
    if requested not in ("numba", "numpy"):
        raise ValueError(f"ENTEVO_BACKEND must be 'numba' or 'numpy', got {requested!r}")
    if requested == "numba" and not HAS_NUMBA:
        raise ImportError("ENTEVO_BACKEND=numba but numba is not installed")
    return requested


BACKEND = _resolve()


def njit(func):
    """``numba.njit`` when available, identity otherwise."""
    if HAS_NUMBA:
        return numba.njit(cache=True, nogil=True)(func)
    return func
