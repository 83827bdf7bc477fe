"""Backend switch for the numeric kernels.

Set ``TORUSTOP_DISABLE_NUMBA=1`` to force the pure-numpy path.  The flag is
read once at import time.
"""

import os

_FALSEY = {"", "0", "false", "no", "off"}

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None

DISABLED_BY_ENV = os.environ.get("TORUSTOP_DISABLE_NUMBA", "").strip().lower() not in _FALSEY
USE_NUMBA = numba is not None and not DISABLED_BY_ENV
BACKEND = "numba" if USE_NUMBA else "numpy"


def jit(fn):
    if USE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


def thread_cap() -> int:
    raw = os.environ.get("TORUSTOP_THREADS", "")
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    ncpu = os.cpu_count() or 1
    return max(1, min(cap, ncpu) if cap > 0 else ncpu)
