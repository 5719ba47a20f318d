"""Numeric kernel backend selection.

Hot inner loops (fixed-step master-equation integration, likelihood grid
evaluation, simplex refinement) have two interchangeable implementations:
a numba-jitted one and a pure-numpy one.  The numba path is the default
whenever numba imports; set the environment variable
``DFSMEM_DISABLE_NUMBA=1`` to force the numpy path.  Both follow the same
algorithm, so results agree to floating-point tolerance.
"""

from __future__ import annotations

import os

ENV_FLAG = "DFSMEM_DISABLE_NUMBA"

_kernels = None
_backend_name = None


def _env_disabled() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() not in ("", "0", "false", "no")


def get_kernels():
    """Return the active kernel module, importing it on first use."""
    global _kernels, _backend_name
    if _kernels is not None:
        return _kernels
    if not _env_disabled():
        try:
            from . import _kernels_numba as mod
            _kernels, _backend_name = mod, "numba"
            return _kernels
        except ImportError:
            pass
    from . import _kernels_numpy as mod
    _kernels, _backend_name = mod, "numpy"
    return _kernels


def backend_name() -> str:
    get_kernels()
    return _backend_name
