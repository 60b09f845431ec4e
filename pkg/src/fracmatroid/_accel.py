"""Backend selection for the modular-arithmetic kernels.

Set ``FRACMATROID_DISABLE_NUMBA=1`` to force the pure-numpy path.
"""

from __future__ import annotations

import functools
import os

DISABLED = os.environ.get("FRACMATROID_DISABLE_NUMBA", "").strip() not in ("", "0", "false")

try:
    if DISABLED:
        raise ImportError("numba disabled by FRACMATROID_DISABLE_NUMBA")
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False
    _njit = None


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise an identity decorator."""
    if HAVE_NUMBA:
        return _njit(*args, **kwargs)

    def deco(f):
        @functools.wraps(f)
        def wrapper(*a, **kw):
            return f(*a, **kw)

        return wrapper

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return deco(args[0])
    return deco


__all__ = ["njit", "HAVE_NUMBA", "DISABLED"]
