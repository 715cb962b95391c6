"""Kernel backend selection.

The compiled kernel is preferred; the pure-Python twin is used when the
extension is unavailable or when ``JACOBISPEC_PURE`` is set in the
environment (useful for parity testing and benchmarking).
"""

from __future__ import annotations

import os

if os.environ.get("JACOBISPEC_PURE"):
    from . import _tridiag_py as kernel
else:
    try:
        from . import _tridiag as kernel  # type: ignore[no-redef]
    except ImportError:
        from . import _tridiag_py as kernel  # type: ignore[no-redef]

BACKEND: str = kernel.BACKEND
tridiag_eigen = kernel.tridiag_eigen
