"""Hot-kernel backend selection.

The compiled extension is preferred when importable; otherwise the NumPy
twin is used.  Set WASS_SMOOTH_PURE=1 to force the NumPy implementation
(useful for benchmarking and for debugging the compiled path).
"""

import os

if os.environ.get("WASS_SMOOTH_PURE"):
    from . import _numpy as _impl
else:
    try:
        from . import _ext as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _numpy as _impl

BACKEND = _impl.BACKEND
zonal_series = _impl.zonal_series
cyclic_costs = _impl.cyclic_costs

__all__ = ["BACKEND", "zonal_series", "cyclic_costs"]
