"""Backend selection for the RK4 kernels.

The compiled extension ``_ckernels`` is used when it was built; otherwise
(or when KOWTOWER_PURE_PYTHON=1) the pure-Python ``_pykernels`` is used.
Both expose ``rk4_top`` and ``rk4_dubrovin`` with identical semantics.
"""

import os

from . import _pykernels

_c = None
if os.environ.get("KOWTOWER_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _c
    except ImportError:  # extension not built
        _c = None

if _c is not None:
    BACKEND = "cython"
    rk4_top = _c.rk4_top
    rk4_dubrovin = _c.rk4_dubrovin
else:
    BACKEND = "python"
    rk4_top = _pykernels.rk4_top
    rk4_dubrovin = _pykernels.rk4_dubrovin


def backends() -> dict:
    """All available implementations, keyed by name."""
    out = {"python": _pykernels}
    if _c is not None:
        out["cython"] = _c
    return out
