"""
Useful functions used to implement invariants.
"""
from __future__ import annotations

import math
from collections.abc import Iterable
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Any
from typing import TYPE_CHECKING

from netefficacy.typing import MISSING

if TYPE_CHECKING:
    from netefficacy._model import InformationSystem


@dataclass(frozen=True)
class ValidationContext:
    """What an invariant may need besides the value it checks, e.g. the
    information system that a contact set must be a subset of."""

    system: InformationSystem | None = None


EMPTY_CONTEXT = ValidationContext()


def join_path(prefix: str, name: str | int) -> str:
    """Append a field name (``str``) or an index (``int``) to a dotted path.

    >>> join_path('hetnet', 'coverage'), join_path('events', 1), join_path('', 'rate')
    ('hetnet.coverage', 'events[1]', 'rate')
    """
    if isinstance(name, int):
        return f'{prefix}[{name}]'
    return f'{prefix}.{name}' if prefix else name


def get_field(obj: Any, name: str) -> Any:
    """Return ``obj.name`` (or ``obj[name]`` for mappings); ``MISSING`` if absent."""
    if isinstance(obj, Mapping):
        return obj.get(name, MISSING)
    return getattr(obj, name, MISSING)


def is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def format_bound(value: float) -> str:
    if math.isinf(value):
        return '∞' if value > 0 else '-∞'
    return f'{value:g}'


def preview(items: Iterable[Any], limit: int = 5) -> str:
    """Sorted, truncated listing of ``items`` for error messages."""
    ordered = sorted(items)
    shown = ', '.join(map(str, ordered[:limit]))
    if len(ordered) > limit:
        shown += f', ... ({len(ordered) - limit} more)'
    return '{' + shown + '}'
