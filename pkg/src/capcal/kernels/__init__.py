"""Hot-loop kernels with a compiled core and a pure-numpy fallback.

The compiled extension is preferred when importable; set
``CAPCAL_PURE_KERNELS=1`` before import to force the fallback.
Both backends expose the same three functions over flat arrays:
``chosen_probs``, ``segment_sum`` and ``masked_segment_sum``.
"""

from __future__ import annotations

import os

from . import pure

if os.environ.get("CAPCAL_PURE_KERNELS"):
    _impl = pure
else:
    try:
        from . import _ckern as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = pure

BACKEND = _impl.BACKEND_NAME
chosen_probs = _impl.chosen_probs
segment_sum = _impl.segment_sum
masked_segment_sum = _impl.masked_segment_sum


def get_backend() -> str:
    """Name of the kernel backend selected at import: compiled or pure."""
    return BACKEND
