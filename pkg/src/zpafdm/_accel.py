"""Numba switch.

Set ``ZPAFDM_NO_NUMBA=1`` to force the pure-numpy kernels. The flag is read
once at import time.
"""

import os

_TRUTHY = {"1", "true", "yes", "on"}

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_AVAILABLE = numba is not None
USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("ZPAFDM_NO_NUMBA", "").lower() not in _TRUTHY

numba_default = {
    "nogil": True,
    "cache": True,
    "fastmath": False,
    "boundscheck": False,
}


def njit(func):
    """Compile ``func`` with numba when available, else return ``None``."""
    if not NUMBA_AVAILABLE:
        return None
    return numba.njit(**numba_default)(func)
