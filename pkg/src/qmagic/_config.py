"""Shared limits, environment flags and exception types."""

from __future__ import annotations

import os

DIM_LIMIT_ENV = "QMAGIC_DIM_LIMIT"
ENUM_LIMIT_ENV = "QMAGIC_ENUM_LIMIT"
DISABLE_NUMBA_ENV = "QMAGIC_DISABLE_NUMBA"

DEFAULT_DIM_LIMIT = 4096
DEFAULT_ENUM_LIMIT = 10_000_000


class InvalidArgument(ValueError):
    """Raised when an argument violates an operation's precondition."""


class ResourceLimitError(RuntimeError):
    """Raised when a request would exceed a configured size limit."""


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise InvalidArgument(f"{name} must be an integer, got {raw!r}") from None
    if value < 1:
        raise InvalidArgument(f"{name} must be positive, got {value}")
    return value


def dim_limit() -> int:
    return _env_int(DIM_LIMIT_ENV, DEFAULT_DIM_LIMIT)


def enum_limit() -> int:
    return _env_int(ENUM_LIMIT_ENV, DEFAULT_ENUM_LIMIT)


def check_dim(l: int, n: int, limit: int | None = None) -> int:
    """Return ``l**n`` or raise if it exceeds the dimension limit."""
    if limit is None:
        limit = dim_limit()
    dim = l**n
    if dim > limit:
        raise ResourceLimitError(f"dimension {l}^{n} = {dim} exceeds limit {limit}")
    return dim
