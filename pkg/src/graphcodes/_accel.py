"""JIT switch.

Set ``GRAPHCODES_DISABLE_JIT=1`` to run every hot kernel through its
vectorized numpy fallback instead of the numba-compiled loop version.
"""

import os

_DISABLED = os.environ.get("GRAPHCODES_DISABLE_JIT", "0").lower() in ("1", "true", "yes")

try:
    from numba import njit as _numba_njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

JIT_ENABLED = HAVE_NUMBA and not _DISABLED


def njit(func=None, **kwargs):
    """``numba.njit`` when numba is importable, identity otherwise.

    Compilation happens regardless of ``JIT_ENABLED`` so the benchmark can
    compare both paths in one process; dispatch is decided in ``kernels``.
    """
    if not HAVE_NUMBA:
        if func is not None:
            return func
        return lambda f: f
    if func is not None:
        return _numba_njit(func, **kwargs)
    return _numba_njit(**kwargs)
