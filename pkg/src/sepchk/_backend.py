"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``SEPCHK_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from sepchk import _pykernels

BACKEND = "python"
kernels = _pykernels

if os.environ.get("SEPCHK_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from sepchk import _kernels as _compiled
    except ImportError:  # extension not built
        pass
    else:
        kernels = _compiled
        BACKEND = "cython"


def available_backends() -> dict:
    """Map backend name to kernel module for every importable backend."""
    out = {"python": _pykernels}
    try:
        from sepchk import _kernels as _compiled
    except ImportError:
        return out
    out["cython"] = _compiled
    return out
