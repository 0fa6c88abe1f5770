"""
Composable invariants for the domain objects, reporting violations as data.
"""
from __future__ import annotations

from ._core import All
from ._core import at_least
from ._core import Each
from ._core import ErrorFmt
from ._core import Field
from ._core import finite
from ._core import InRange
from ._core import Invariant
from ._core import non_negative
from ._core import not_empty
from ._core import positive
from ._core import Predicate
from ._core import Rephraser
from ._core import SubsetOf
from ._core import SumsTo
from ._core import unsigned_int
from ._registry import register
from ._registry import rules_for
from ._registry import validated_by
from .common import EMPTY_CONTEXT
from .common import ValidationContext

__all__ = [
    'All',
    'EMPTY_CONTEXT',
    'Each',
    'ErrorFmt',
    'Field',
    'InRange',
    'Invariant',
    'Predicate',
    'Rephraser',
    'SubsetOf',
    'SumsTo',
    'ValidationContext',
    'at_least',
    'finite',
    'non_negative',
    'not_empty',
    'positive',
    'register',
    'rules_for',
    'unsigned_int',
    'validated_by',
]
