"""Backend selection for the hot loops.

numba is used when importable unless ``QMAGIC_DISABLE_NUMBA`` is set to a
truthy value; the numpy module is always available and gives identical
results.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from types import ModuleType

from .._config import DISABLE_NUMBA_ENV
from . import _numpy

__all__ = ["backend", "backend_name", "use_backend", "available_backends", "get"]


def _load_numba() -> ModuleType | None:
    try:
        from . import _numba
    except ImportError:
        return None
    return _numba


_BACKENDS: dict[str, ModuleType] = {"numpy": _numpy}
_nb = _load_numba()
if _nb is not None:
    _BACKENDS["numba"] = _nb

_flag = os.environ.get(DISABLE_NUMBA_ENV, "").strip().lower()
_active = "numpy" if _flag in ("1", "true", "yes", "on") or _nb is None else "numba"


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def backend() -> ModuleType:
    return _BACKENDS[_active]


def backend_name() -> str:
    return _active


def get(name: str) -> ModuleType:
    return _BACKENDS[name]


@contextmanager
def use_backend(name: str):
    """Temporarily switch backend (benchmarks and cross-checks)."""
    global _active
    if name not in _BACKENDS:
        raise KeyError(f"backend {name!r} not available; have {available_backends()}")
    prev, _active = _active, name
    try:
        yield _BACKENDS[name]
    finally:
        _active = prev
