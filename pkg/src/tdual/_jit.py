"""Optional numba acceleration.

Set ``TDUAL_DISABLE_JIT=1`` to force the pure-numpy code paths. When numba
is not importable the flag is implied.
"""

import os

_disabled = os.environ.get("TDUAL_DISABLE_JIT", "").strip().lower() in ("1", "true", "yes")

try:
    if _disabled:
        raise ImportError
    from numba import njit as _numba_njit

    HAVE_NUMBA = True
except ImportError:
    _numba_njit = None
    HAVE_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise an identity decorator."""
    if HAVE_NUMBA:
        return _numba_njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def decorate(func):
        return func

    return decorate


def jit_enabled():
    return HAVE_NUMBA
