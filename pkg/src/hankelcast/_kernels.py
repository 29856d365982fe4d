"""Backend selection for the sequential inner loops.

The compiled extension is used when it was built; otherwise the pure-Python
module is used. Setting ``HANKELCAST_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _fallback

BACKEND = "python"
_impl = _fallback

if os.environ.get("HANKELCAST_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _fallback

simulate = _impl.simulate
hankel = _impl.hankel
roll_recursion = _impl.roll_recursion

__all__ = ["BACKEND", "simulate", "hankel", "roll_recursion"]
