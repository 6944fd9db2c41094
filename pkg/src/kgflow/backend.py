"""Kernel backend selection.

The hot numerical paths exist twice: a Cython extension
(``kgflow._kernels``) and a pure-Python twin (``kgflow._kernels_py``) with
identical signatures and the same parameter-vector layout. The compiled
module is preferred when importable; set KGFLOW_FORCE_PY=1 to force the
pure-Python kernels (used by the equivalence tests and the benchmark).
"""
import os

from . import _kernels_py

__all__ = ["kernels", "backend_name", "PARAMS_LEN", "LAYOUT_VERSION"]


def _select():
    if os.environ.get("KGFLOW_FORCE_PY", "").strip() not in ("", "0"):
        return _kernels_py
    try:
        from . import _kernels
    except ImportError:
        return _kernels_py
    if getattr(_kernels, "LAYOUT_VERSION", -1) != _kernels_py.LAYOUT_VERSION:
        # stale build; the pure twin defines the layout contract
        return _kernels_py
    return _kernels


kernels = _select()

PARAMS_LEN = _kernels_py.PARAMS_LEN
LAYOUT_VERSION = _kernels_py.LAYOUT_VERSION


def backend_name():
    """Name of the active kernel backend: "cython" or "python"."""
    return kernels.backend_name()
