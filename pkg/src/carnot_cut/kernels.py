"""Backend selection for the hot loops.

The compiled ``_ckernels`` extension is used when it imports; otherwise, or
when ``CARNOT_CUT_PURE`` is set to a non-empty value other than ``0``, the
pure-Python ``_pykernels`` module is used.  Both expose ``exp_cross``,
``exp_cross_jac``, ``rk4_cross`` and ``rk4_cross_path``.
"""

import os

from . import _pykernels

_force_pure = os.environ.get("CARNOT_CUT_PURE", "") not in ("", "0")

try:
    if _force_pure:
        raise ImportError("pure backend requested")
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"

exp_cross = _impl.exp_cross
exp_cross_jac = _impl.exp_cross_jac
rk4_cross = _impl.rk4_cross
rk4_cross_path = _impl.rk4_cross_path


def compiled_available() -> bool:
    try:
        from . import _ckernels  # noqa: F401
    except ImportError:
        return False
    return True
