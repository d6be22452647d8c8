"""Numba switch.

Set ``NEARBYCYCLES_DISABLE_NUMBA=1`` to force the pure-numpy kernels. The
flag is read at import time; ``use_numba()`` can be overridden per call site
by passing ``backend=`` to the kernel dispatchers.
"""
import os

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

_DISABLED = os.environ.get("NEARBYCYCLES_DISABLE_NUMBA", "").strip().lower() in (
    "1", "true", "yes", "on",
)


def use_numba():
    return HAVE_NUMBA and not _DISABLED


def njit(func):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise."""
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True)(func)


def resolve_backend(backend=None):
    if backend is None:
        return "numba" if use_numba() else "numpy"
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    return backend
