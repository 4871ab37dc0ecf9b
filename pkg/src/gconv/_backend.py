"""Kernel backend selection.

The compiled extension is preferred when present; set GCONV_PURE_PYTHON=1
to force the pure backend.  Both expose the same functions and produce
bit-identical results, so everything above this module is backend-blind.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("GCONV_PURE_PYTHON"):
    kernels = _kernels_py
    backend_name = "python"
else:
    try:
        from . import _kernels_cy as kernels  # type: ignore[no-redef]

        backend_name = "native"
    except ImportError:
        kernels = _kernels_py
        backend_name = "python"


def get_kernels(which: str = "auto"):
    """Fetch a specific backend, mainly for benchmarks and parity tests."""
    if which == "python":
        return _kernels_py
    if which == "native":
        from . import _kernels_cy

        return _kernels_cy
    return kernels
