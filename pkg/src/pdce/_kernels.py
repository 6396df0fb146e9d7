"""Kernel selection: compiled Smith reduction when possible, pure fallback.

The compiled kernel (``pdce._snf_c``) works in int64 with checked
arithmetic and raises ``OverflowError`` rather than wrapping; this wrapper
retries any overflowing call with the arbitrary-precision pure-Python
kernel.  Set ``PDCE_PURE=1`` to force the pure path (used by the benchmark
and for debugging).
"""

from __future__ import annotations

import os

from . import _snf_py

if os.environ.get("PDCE_PURE"):
    _compiled = None
else:
    try:
        from . import _snf_c as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None

COMPILED_AVAILABLE = _compiled is not None


def smith_reduce(mat, want_u=False, want_v=False, want_uinv=False, want_vinv=False):
    """Smith-diagonalize ``mat`` (list of int lists); see ``_snf_py.smith_reduce``."""
    if _compiled is not None:
        try:
            return _compiled.smith_reduce_i64(mat, want_u, want_v, want_uinv, want_vinv)
        except OverflowError:
            pass
    return _snf_py.smith_reduce(mat, want_u, want_v, want_uinv, want_vinv)


hermite_rows = _snf_py.hermite_rows
