"""Error types and size limits shared by every module."""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, replace


class SizeLimitError(ValueError):
    """Instance is larger than the configured limits allow."""


class DimensionError(ValueError):
    """Operands live on incompatible spaces."""


class ContractError(ValueError):
    """Input violates the documented precondition of an operation."""


class NotVerifiedError(ContractError):
    """A design was used where an exactly verified design is required."""


@dataclass(frozen=True)
class Limits:
    max_perm_n: int = 8
    max_dim: int = 4096  # bound on d**n for dense operators
    max_system_n: int = 7
    max_exhaustive_n: int = 4


_LIMITS: contextvars.ContextVar[Limits] = contextvars.ContextVar("symtwirl_limits", default=Limits())


def current_limits() -> Limits:
    return _LIMITS.get()


@contextlib.contextmanager
def size_limits(**overrides):
    """Temporarily override size limits, e.g. ``with size_limits(max_dim=2**14): ...``."""
    token = _LIMITS.set(replace(_LIMITS.get(), **overrides))
    try:
        yield _LIMITS.get()
    finally:
        _LIMITS.reset(token)


def check_dim(d: int, n: int) -> int:
    if d < 1 or n < 1:
        raise ValueError(f"d and n must be positive, got d={d}, n={n}")
    dim = d**n
    limit = current_limits().max_dim
    if dim > limit:
        raise SizeLimitError(f"d**n = {dim} exceeds max_dim = {limit}")
    return dim
