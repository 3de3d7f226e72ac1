"""Optional numba acceleration.

Set ``OSAC_DISABLE_NUMBA=1`` to run every kernel as plain Python/numpy. The
same source is used on both paths, so results are bitwise identical.
"""
import os

_disabled = os.environ.get("OSAC_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _disabled:
        raise ImportError
    import numba
except ImportError:
    numba = None

NUMBA_ENABLED = numba is not None


def njit(fn=None, **kwargs):
    """``numba.njit`` when available, identity otherwise."""
    if fn is None:
        return lambda f: njit(f, **kwargs)
    if NUMBA_ENABLED:
        return numba.njit(cache=True, **kwargs)(fn)
    return fn


def py_func(fn):
    """Return the uncompiled Python function behind a kernel."""
    return getattr(fn, "py_func", fn)
