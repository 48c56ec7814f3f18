"""Backend selection for the deletion-update kernels.

Prefers the compiled extension, falls back to numpy. Set the environment
variable MAGKIT_PURE_PYTHON=1 to force the fallback (used by the benchmark
and by backend-parity tests).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("MAGKIT_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

BACKEND: str = _impl.BACKEND
delete_index = _impl.delete_index
subset_inverse_magnitudes = _impl.subset_inverse_magnitudes
