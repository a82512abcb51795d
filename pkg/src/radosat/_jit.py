"""Optional numba acceleration.

Hot kernels are written as plain array code and compiled with numba when it
is available. Setting RADOSAT_NO_NUMBA=1 (or any truthy value) selects the
pure-Python/numpy fallback path instead; results are identical either way.
"""

from __future__ import annotations

import os

_flag = os.environ.get("RADOSAT_NO_NUMBA", "").strip().lower()
USE_NUMBA = _flag not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        import numba
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

if USE_NUMBA:
    import time

    from numba import njit, objmode

    def maybe_njit(func=None, **kwargs):
        kwargs.setdefault("cache", True)
        if func is None:
            return njit(**kwargs)
        return njit(**kwargs)(func)

    @njit(cache=True)
    def monotonic_seconds() -> float:
        with objmode(t="f8"):
            t = time.perf_counter()
        return t

else:
    import time

    def maybe_njit(func=None, **kwargs):
        if func is None:
            return lambda f: f
        return func

    def monotonic_seconds() -> float:
        return time.perf_counter()
