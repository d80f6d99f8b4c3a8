"""Backend selection for the hot kernels.

The compiled extension is used when it was built; set ``L2RANK_PURE_PYTHON=1``
to force the pure-Python implementation.
"""
import os

from . import _pykernels

if os.environ.get("L2RANK_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.BACKEND
enumerate_cosets = _impl.enumerate_cosets
word_images = _impl.word_images
trace = _impl.trace
cycle_length = _impl.cycle_length


def available_backends():
    out = {"python": _pykernels}
    try:
        from . import _ckernels
        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
