"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-numpy module
is the fallback.  NARXIV_KERNELS=python|compiled forces a choice (mainly
for the benchmark and the equivalence tests).  Both backends return
bitwise-identical endpoints.
"""

from __future__ import annotations

import os

_requested = os.environ.get("NARXIV_KERNELS", "").strip().lower()

if _requested == "python":
    from . import _kernels_py as kernels
elif _requested == "compiled":
    from . import _kernels as kernels  # type: ignore[no-redef]
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]


def backend_name() -> str:
    """Name of the active kernel backend ("compiled" or "python")."""
    return kernels.NAME
