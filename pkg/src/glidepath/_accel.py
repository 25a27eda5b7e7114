"""Backend selection for the numeric kernels.

Set ``GLIDEPATH_NUMBA=0`` in the environment to force the pure-numpy path.
The flag is read once at import time.
"""

import os

_FLAG = os.environ.get("GLIDEPATH_NUMBA", "1").strip().lower()

try:
    from numba import njit as _njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    _njit = None

USE_NUMBA = _njit is not None and _FLAG not in ("0", "false", "no", "off")


def jit(fn):
    """Compile ``fn`` with numba when it is available, else return it unchanged."""
    if _njit is None:
        return fn
    return _njit(cache=True)(fn)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
