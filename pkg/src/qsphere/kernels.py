"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it was built and
``QS_PURE_PYTHON`` is not set to ``1``; otherwise the numpy versions in
``_pykernels`` are used.  Both expose the same functions.
"""
from __future__ import annotations

import os

from . import _pykernels as python_impl

try:
    from . import _kernels as compiled_impl
except ImportError:  # extension not built
    compiled_impl = None

if compiled_impl is not None and os.environ.get("QS_PURE_PYTHON", "0") != "1":
    BACKEND = "cython"
    _impl = compiled_impl
else:
    BACKEND = "python"
    _impl = python_impl

rref_mod_p = _impl.rref_mod_p
weighted_ball_sums = _impl.weighted_ball_sums

__all__ = ["BACKEND", "rref_mod_p", "weighted_ball_sums", "python_impl", "compiled_impl"]
