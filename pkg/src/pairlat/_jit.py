"""Optional numba acceleration.

Kernels are written once against numpy slices and compiled with ``numba.njit``
when numba is importable and ``PAIRLAT_DISABLE_JIT`` is unset (or ``0``).
Otherwise they run as plain numpy code. The original Python function of a
compiled kernel stays reachable through ``.py_func`` in both modes.
"""

import os

_flag = os.environ.get("PAIRLAT_DISABLE_JIT", "").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError
    import numba

    JIT_ENABLED = True
except ImportError:
    numba = None
    JIT_ENABLED = False


def njit(func):
    if JIT_ENABLED:
        return numba.njit(cache=True)(func)
    func.py_func = func
    return func
