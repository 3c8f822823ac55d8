"""Kernel backend selection, resolved once at import.

The compiled Cython kernels are preferred when the extension built; the
NumPy fallback is functionally identical (cutoff densities, delta, and
assignments match bitwise; gaussian densities agree to ~1e-15 relative
because the two backends sum each row in a different association order).
Set PEAKSPAM_BACKEND=python or =cython to force one side.
"""

import os

_requested = os.environ.get("PEAKSPAM_BACKEND", "").strip().lower()

if _requested == "python":
    from . import _kernels_py as kernels

    BACKEND = "python"
elif _requested == "cython":
    from . import _kernels_cy as kernels  # ImportError here means the ext is not built

    BACKEND = "cython"
else:
    try:
        from . import _kernels_cy as kernels

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as kernels

        BACKEND = "python"
