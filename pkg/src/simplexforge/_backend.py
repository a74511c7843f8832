"""Kernel backend selection.

The compiled extension is used when it imports; setting the environment
variable ``SIMPLEXFORGE_PURE_PYTHON=1`` forces the NumPy fallback.
"""
import os

from . import _kernels_py

_FORCE_PURE = os.environ.get("SIMPLEXFORGE_PURE_PYTHON", "") not in ("", "0")

if _FORCE_PURE:
    _compiled = None
else:
    try:
        from . import _ckernels as _compiled
    except ImportError:
        _compiled = None

BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled

BACKEND_NAME = "compiled" if _compiled is not None else "python"
tower_gauge = BACKENDS[BACKEND_NAME].tower_gauge
