"""Numba switch.

Set ``UUREL_DISABLE_NUMBA=1`` to force the pure-numpy kernels even when
numba is importable.  Both paths stay importable either way so they can be
benchmarked side by side.
"""
import os

_disabled = os.environ.get("UUREL_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _disabled


def njit(*args, **kwargs):
    """``numba.njit`` when numba is installed, otherwise an identity decorator."""
    kwargs.setdefault("cache", True)
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]
    return lambda f: f
