"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; the numpy
fallback is always available.  ``ATTNPROF_BACKEND=python|compiled`` forces
a choice (forcing ``compiled`` raises if the extension is missing).
Dense matrix products are delegated to BLAS in both backends; only the
kernels numpy handles poorly (banded attention, convolution packing,
fused normalization/activation loops) differ.
"""

from __future__ import annotations

import os

from . import _pykernels

try:
    from . import _core
except ImportError:
    _core = None

_forced = os.environ.get("ATTNPROF_BACKEND", "").strip().lower()
if _forced == "python":
    kernels = _pykernels
elif _forced == "compiled":
    if _core is None:
        raise ImportError(
            "ATTNPROF_BACKEND=compiled but the extension is not built; "
            "run `pip install -e . --no-build-isolation`"
        )
    kernels = _core
elif _forced:
    raise ImportError(f"unknown ATTNPROF_BACKEND value: {_forced!r}")
else:
    kernels = _core if _core is not None else _pykernels


def backend_name() -> str:
    return kernels.NAME


def has_compiled() -> bool:
    return _core is not None


def get_backend(name: str):
    """Fetch a specific backend module (used by the comparison benchmark)."""
    if name == "python":
        return _pykernels
    if name == "compiled":
        if _core is None:
            raise ImportError("compiled backend not built")
        return _core
    raise ValueError(f"unknown backend {name!r}")
