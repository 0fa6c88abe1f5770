"""
Maps each validated type to the invariant describing its valid instances.
Modules defining a validated type register it at import time.
"""
from __future__ import annotations

from typing import Callable
from typing import TypeVar

from ._core import Invariant

_T = TypeVar('_T', bound=type)

_RULES: dict[type, Invariant] = {}


def register(cls: type, invariant: Invariant) -> None:
    if cls in _RULES:
        raise ValueError(f'invariants for {cls.__name__} are already registered')
    _RULES[cls] = invariant


def validated_by(invariant: Invariant) -> Callable[[_T], _T]:
    """Class decorator registering ``invariant`` for the decorated class."""

    def decorator(cls: _T) -> _T:
        register(cls, invariant)
        return cls

    return decorator


def rules_for(obj: object) -> Invariant | None:
    for cls in type(obj).__mro__:
        if cls in _RULES:
            return _RULES[cls]
    return None
