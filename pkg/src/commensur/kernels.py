"""Kernel selection: the compiled extension when built, else the numpy fallback.

Set ``COMMENSUR_PURE=1`` to force the fallback.
"""

import os

_impl = None
BACKEND = "python"
if os.environ.get("COMMENSUR_PURE", "") != "1":
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = None
if _impl is None:
    from . import _pykernels as _impl

unit_inverse = _impl.unit_inverse
radical_mask = _impl.radical_mask
closure = _impl.closure
quotient_exponent = _impl.quotient_exponent
