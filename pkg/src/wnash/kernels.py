"""Kernel backend selection.

The compiled extension is preferred; set ``WNASH_PURE_PYTHON=1`` to force
the pure-Python fallback.
"""
import os

from . import _pykernels

if os.environ.get("WNASH_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

eval_batch = _impl.eval_batch
attractor_ranks = _impl.attractor_ranks

__all__ = ["BACKEND", "eval_batch", "attractor_ranks"]
