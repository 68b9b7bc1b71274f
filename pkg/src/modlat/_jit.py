"""Optional numba compilation.

Set ``MODLAT_DISABLE_NUMBA=1`` before import to force the pure-numpy kernels.
"""
import os

try:
    from numba import njit as _njit
    NUMBA_INSTALLED = True
except ImportError:  # pragma: no cover
    NUMBA_INSTALLED = False

USE_NUMBA = NUMBA_INSTALLED and os.environ.get("MODLAT_DISABLE_NUMBA", "") not in ("1", "true", "yes")


def optional_njit(*args, **kwargs):
    """Like ``numba.njit`` but returns ``None`` when numba is unavailable or disabled."""

    def decorator(func):
        if not NUMBA_INSTALLED:
            return None
        return _njit(*args, **kwargs)(func)

    return decorator
