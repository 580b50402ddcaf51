"""Kernel backend selection.

The compiled extension ``cakegame._kernels_c`` implements the hot
numeric kernels; ``cakegame._kernels_py`` is a pure-Python/numpy twin
with identical arithmetic. The compiled module is preferred when it
imports cleanly. Override with CAKEGAME_BACKEND=python|c.
"""

import os

from . import _kernels_py

_forced = os.environ.get("CAKEGAME_BACKEND", "").strip().lower()

if _forced in ("python", "py"):
    kernels = _kernels_py
elif _forced in ("c", "compiled", "cython"):
    from . import _kernels_c as kernels  # hard failure when explicitly forced
else:
    try:
        from . import _kernels_c as kernels
    except ImportError:
        kernels = _kernels_py

BACKEND = kernels.BACKEND_NAME


def available_backends():
    out = {"python": _kernels_py}
    try:
        from . import _kernels_c

        out["c"] = _kernels_c
    except ImportError:
        pass
    return out
