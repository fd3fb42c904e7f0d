"""Numba switch.

Kernels are compiled with ``numba.njit`` unless numba is missing or the
environment variable ``SPINGEO_DISABLE_NUMBA`` is set to a truthy value, in
which case the very same functions run as plain Python over numpy arrays.
The choice is made once, at import time.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_FLAG = os.environ.get("SPINGEO_DISABLE_NUMBA", "").strip().lower()
NUMBA_ENABLED = numba is not None and _FLAG not in {"1", "true", "yes", "on"}


def jit(fn):
    if NUMBA_ENABLED:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


def backend_name():
    return "numba" if NUMBA_ENABLED else "numpy"
