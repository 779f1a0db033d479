"""Backend selection for the inner loops.

The compiled extension ``_ckernels`` is used when it was built and imports
cleanly; otherwise the pure-Python twin is used.  Setting
``FREESPACE_LAB_PURE=1`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("FREESPACE_LAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        _impl = _ckernels
        BACKEND = "cython"

triangle_violations = _impl.triangle_violations
segment_members = _impl.segment_members
excess_row = _impl.excess_row
max_ratio = _impl.max_ratio
pivot = _impl.pivot
ratio_test = _impl.ratio_test


def available_backends() -> dict:
    """Name -> module for every importable backend (for tests/benchmarks)."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels  # type: ignore[attr-defined]
    except ImportError:
        return out
    out["cython"] = _ckernels
    return out
