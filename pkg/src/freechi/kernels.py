"""Backend selection for the partition kernels.

The compiled extension is used when importable; ``FREECHI_PURE=1`` forces
the pure-Python fallback. ``BACKEND`` names the active one.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("FREECHI_PURE", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "compiled" if _impl is not _pykernels else "python"

iter_nc_labels = _impl.iter_nc_labels
colored_nc_profile = _impl.colored_nc_profile
joins_interval_to_one = _impl.joins_interval_to_one
kreweras_right_labels = _impl.kreweras_right_labels
kreweras_left_labels = _impl.kreweras_left_labels
nc_kreweras_profile = _impl.nc_kreweras_profile
