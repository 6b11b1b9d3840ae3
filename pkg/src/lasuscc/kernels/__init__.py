"""Statevector kernel backend selection.

Two interchangeable implementations exist: a compiled Cython module
(``lasuscc.kernels._core``) and a vectorized NumPy fallback
(``lasuscc.kernels.fallback``).  The compiled backend is used when it is
importable; set ``LAS_USCC_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import fallback

_FORCE_PURE = os.environ.get("LAS_USCC_PURE_PYTHON", "").strip() not in ("", "0")

_compiled: ModuleType | None = None
if not _FORCE_PURE:
    try:
        from . import _core as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None

_backend: ModuleType = _compiled if _compiled is not None else fallback


def backend_name() -> str:
    """Name of the active backend: ``"compiled"`` or ``"python"``."""
    return "compiled" if _backend is not fallback else "python"


def get_backend(name: str | None = None) -> ModuleType:
    """Return a kernel module.

    ``None`` returns the active default, ``"compiled"`` requires the Cython
    extension, ``"python"`` returns the NumPy fallback.
    """
    if name is None:
        return _backend
    if name == "python":
        return fallback
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernel backend is not available")
        return _compiled
    raise ValueError(f"unknown kernel backend {name!r}")


pauli_rotation = _backend.pauli_rotation
pauli_accumulate = _backend.pauli_accumulate
excitation_rotation = _backend.excitation_rotation
excitation_accumulate = _backend.excitation_accumulate

__all__ = [
    "backend_name",
    "get_backend",
    "pauli_rotation",
    "pauli_accumulate",
    "excitation_rotation",
    "excitation_accumulate",
]
