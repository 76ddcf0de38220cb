"""Backend selection for the compiled kernels.

Set ``WANDERLAB_DISABLE_NUMBA=1`` to force the pure-numpy paths, and
``WANDERLAB_THREADS=<n>`` to cap the numba worker pool.
"""
import os

_disabled = os.environ.get("WANDERLAB_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _disabled:
        raise ImportError("numba disabled by WANDERLAB_DISABLE_NUMBA")
    import numba
    HAS_NUMBA = True
except ImportError:
    numba = None
    HAS_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    if HAS_NUMBA:
        return numba.njit(*args, cache=True, **kwargs)

    def wrap(func):
        return func

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return wrap


def configure_threads():
    raw = os.environ.get("WANDERLAB_THREADS")
    if not raw or not HAS_NUMBA:
        return
    try:
        n = int(raw)
    except ValueError:
        return
    n = max(1, min(n, numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)


configure_threads()
