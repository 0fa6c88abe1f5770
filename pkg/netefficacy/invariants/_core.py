from __future__ import annotations

import abc
import math
from collections.abc import Collection
from typing import Any
from typing import Callable

from .common import EMPTY_CONTEXT
from .common import format_bound
from .common import get_field
from .common import is_number
from .common import join_path
from .common import preview
from .common import ValidationContext
from netefficacy._util import class_name
from netefficacy._util import FrozenSpace
from netefficacy._util import make_repr
from netefficacy.exceptions import ValidationError
from netefficacy.exceptions import Violation
from netefficacy.typing import MISSING

CheckFn = Callable[[Any, ValidationContext], bool]
SupersetFn = Callable[[Any, ValidationContext], 'Collection[Any] | None']
ErrorRephraser = Callable[[Violation], str]


class Invariant(abc.ABC):
    """
    A property that a value (usually one of the core domain objects, or one of
    their fields) must have. Checking an invariant never raises: it returns
    the list of :class:`~netefficacy.exceptions.Violation`, each one located
    by the dotted path of the offending field.

    Invariants compose: ``a & b`` holds if both hold and reports the violations
    of both; :class:`Field` and :class:`Each` move an invariant down to a field
    or to the items of a collection.
    """

    @abc.abstractmethod
    def description(self) -> str:
        """A succinct description of the invariant."""

    @abc.abstractmethod
    def violations(self, value: Any, path: str = '', ctx: ValidationContext = EMPTY_CONTEXT) -> list[Violation]:
        """Return the violations of this invariant by ``value`` (located at ``path``)."""

    def holds(self, value: Any, ctx: ValidationContext = EMPTY_CONTEXT) -> bool:
        return not self.violations(value, '', ctx)

    def check(
        self, value: Any, path: str = '', ctx: ValidationContext = EMPTY_CONTEXT, subject: str | None = None
    ) -> None:
        """Raise :exc:`~netefficacy.exceptions.ValidationError` if there's any violation."""
        found = self.violations(value, path, ctx)
        if found:
            raise ValidationError(found, subject=subject or class_name(value))

    def rephrased(self, error: str | ErrorRephraser) -> Rephraser:
        """
        Override the error message of this invariant wrapping it with a :class:`Rephraser`.

        :param error:
            a string, eventually a ``format`` string supporting the replacement
            fields described in :class:`ErrorFmt`; or a function
            ``(violation: Violation) -> str``.
        """
        return Rephraser(self, error=error)

    def __and__(self, other: Invariant) -> All:
        return All(self, other)

    def __repr__(self) -> str:
        return f'{class_name(self)}()'


class All(Invariant):
    """Holds if all operands hold. Unlike a short-circuiting ``and``, it
    reports the violations of every operand."""

    def __init__(self, *invariants: Invariant):
        self.invariants = invariants

    def description(self) -> str:
        return ' and '.join(
            '(%s)' % inv.description() if isinstance(inv, All) else inv.description() for inv in self.invariants
        )

    def violations(self, value: Any, path: str = '', ctx: ValidationContext = EMPTY_CONTEXT) -> list[Violation]:
        found: list[Violation] = []
        for inv in self.invariants:
            found.extend(inv.violations(value, path, ctx))
        return found

    def __and__(self, other: Invariant) -> All:
        if isinstance(other, All):
            return All(*self.invariants, *other.invariants)
        return All(*self.invariants, other)

    def __repr__(self) -> str:
        return make_repr(self, *self.invariants)


class ErrorFmt(FrozenSpace):
    """Replacement fields supported by the ``error`` format string of :class:`Rephraser`::

        positive.rephrased(error=f'{ErrorFmt.error} (rates are per node and time unit)')
    """

    error = '{error}'
    """Replaced by the original error message."""

    path = '{path}'
    """Replaced by the dotted path of the offending field."""


class Rephraser(Invariant):
    """Overrides the error message of the wrapped invariant.

    You'll rarely use this class directly; use :meth:`Invariant.rephrased`.
    """

    def __init__(self, invariant: Invariant, error: str | ErrorRephraser):
        self.invariant = invariant
        self._error = error

    def description(self) -> str:
        return self.invariant.description()

    def _rephrase(self, violation: Violation) -> str:
        if isinstance(self._error, str):
            return self._error.format(error=violation.message, path=violation.path)
        return self._error(violation)

    def violations(self, value: Any, path: str = '', ctx: ValidationContext = EMPTY_CONTEXT) -> list[Violation]:
        return [Violation(v.path, self._rephrase(v)) for v in self.invariant.violations(value, path, ctx)]

    def __repr__(self) -> str:
        return make_repr(self, self.invariant, error=self._error)


class Field(Invariant):
    """Applies ``invariant`` to the field ``name`` of the checked value."""

    def __init__(self, name: str, invariant: Invariant, optional: bool = False):
        self.name = name
        self.invariant = invariant
        self.optional = optional

    def description(self) -> str:
        return f'{self.name}: {self.invariant.description()}'

    def violations(self, value: Any, path: str = '', ctx: ValidationContext = EMPTY_CONTEXT) -> list[Violation]:
        field_path = join_path(path, self.name)
        field_value = get_field(value, self.name)
        if field_value is MISSING or (self.optional and field_value is None):
            return [] if self.optional else [Violation(field_path, 'is missing')]
        return self.invariant.violations(field_value, field_path, ctx)

    def __repr__(self) -> str:
        return make_repr(self, self.name, self.invariant)


class Each(Invariant):
    """Applies ``invariant`` to every item of an iterable value."""

    def __init__(self, invariant: Invariant):
        self.invariant = invariant

    def description(self) -> str:
        return f'each {self.invariant.description()}'

    def violations(self, value: Any, path: str = '', ctx: ValidationContext = EMPTY_CONTEXT) -> list[Violation]:
        found: list[Violation] = []
        for i, item in enumerate(value):
            found.extend(self.invariant.violations(item, join_path(path, i), ctx))
        return found


class Predicate(Invariant):
    """The most general invariant: a function ``(value, ctx) -> bool``."""

    def __init__(self, check: CheckFn, description: str, error: str | None = None):
        self._check = check
        self._description = description
        self._error = error or f'must satisfy: {description}'

    def description(self) -> str:
        return self._description

    def violations(self, value: Any, path: str = '', ctx: ValidationContext = EMPTY_CONTEXT) -> list[Violation]:
        return [] if self._check(value, ctx) else [Violation(path, self._error)]

    def __repr__(self) -> str:
        return make_repr(self, self._description)


class InRange(Invariant):
    """Holds for numbers between ``lo`` and ``hi``; NaN is never in range."""

    def __init__(self, lo: float = -math.inf, hi: float = math.inf, lo_closed: bool = True, hi_closed: bool = True):
        self.lo = lo
        self.hi = hi
        self.lo_closed = lo_closed
        self.hi_closed = hi_closed

    def description(self) -> str:
        left = '[' if self.lo_closed else '('
        right = ']' if self.hi_closed else ')'
        return f'in {left}{format_bound(self.lo)}, {format_bound(self.hi)}{right}'

    def _contains(self, x: float) -> bool:
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return above and below

    def violations(self, value: Any, path: str = '', ctx: ValidationContext = EMPTY_CONTEXT) -> list[Violation]:
        if not is_number(value):
            return [Violation(path, f'must be a number; it is {value!r}')]
        if not self._contains(value):
            return [Violation(path, f'out of range: {value!r} is not {self.description()}')]
        return []

    def __repr__(self) -> str:
        return make_repr(self, self.lo, self.hi, lo_closed=self.lo_closed, hi_closed=self.hi_closed)


class SumsTo(Invariant):
    """Holds for collections of numbers whose sum is ``target`` within ``tol``."""

    def __init__(self, target: float, tol: float):
        self.target = target
        self.tol = tol

    def description(self) -> str:
        return f'sum to {self.target:g} within {self.tol:g}'

    def violations(self, value: Any, path: str = '', ctx: ValidationContext = EMPTY_CONTEXT) -> list[Violation]:
        total = math.fsum(value)
        if not abs(total - self.target) <= self.tol:
            return [Violation(path, f'probability sum is {total!r}, must {self.description()}')]
        return []


class SubsetOf(Invariant):
    """Holds for collections contained in the set returned by ``superset``;
    skipped when ``superset`` returns ``None`` (e.g. no system to check against)."""

    def __init__(self, superset: SupersetFn, name: str):
        self.superset = superset
        self.name = name

    def description(self) -> str:
        return f'subset of {self.name}'

    def violations(self, value: Any, path: str = '', ctx: ValidationContext = EMPTY_CONTEXT) -> list[Violation]:
        superset = self.superset(value, ctx)
        if superset is None:
            return []
        outside = set(value).difference(superset)
        if outside:
            return [Violation(path, f'not a {self.description()}: {preview(outside)} outside')]
        return []

    def __repr__(self) -> str:
        return make_repr(self, self.name)


def _is_unsigned_int(value: Any, ctx: ValidationContext) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= 0


positive = InRange(0.0, math.inf, lo_closed=False)
"""Holds for numbers > 0."""

non_negative = InRange(0.0, math.inf)
"""Holds for numbers >= 0."""

finite = Predicate(lambda v, ctx: is_number(v) and math.isfinite(v), 'finite', error='must be a finite number')
"""Holds for finite numbers."""

not_empty = Predicate(lambda v, ctx: len(v) > 0, 'not empty', error='must not be empty')
"""Holds for non-empty collections."""

unsigned_int = Predicate(_is_unsigned_int, 'unsigned integer', error='must be an unsigned integer')
"""Holds for ``int`` values >= 0 (``bool`` excluded)."""


def at_least(n: int) -> Invariant:
    """Holds for numbers >= ``n``."""
    return InRange(n, math.inf).rephrased(error=f'must be >= {n}')
