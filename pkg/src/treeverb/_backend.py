"""Pick the portrait kernel: compiled if importable, else pure Python.

Set ``TREEVERB_BACKEND=python`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernel_py

BACKEND = "python"
PortraitKernel = _kernel_py.PortraitKernel

if os.environ.get("TREEVERB_BACKEND", "").lower() != "python":
    try:
        from . import _kernel  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        PortraitKernel = _kernel.PortraitKernel
        BACKEND = "cython"

KERNELS = {"python": _kernel_py.PortraitKernel}
if BACKEND == "cython":
    KERNELS["cython"] = PortraitKernel
