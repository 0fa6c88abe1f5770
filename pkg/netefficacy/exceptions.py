from __future__ import annotations

from collections.abc import Sequence
from typing import NamedTuple


class Violation(NamedTuple):
    """An invariant that does not hold, located by the dotted path of the field."""

    path: str
    message: str

    def __str__(self) -> str:
        return f'{self.path}: {self.message}' if self.path else self.message


def format_violation_list(violations: Sequence[Violation], indent: int = 2) -> str:
    indentation = ' ' * indent
    return ''.join(f'{indentation}{v}\n' for v in violations)


class NetEfficacyError(Exception):
    """Base class of all the errors raised by netefficacy."""

    kind = 'runtime'


class PreconditionError(NetEfficacyError, ValueError):
    """An argument doesn't satisfy the precondition of an operation."""

    kind = 'precondition'


class ValidationError(NetEfficacyError, ValueError):
    """Raised by operations that receive an object violating its invariants.
    ``validate`` itself never raises: it returns the violations."""

    kind = 'validation'

    def __init__(self, violations: Sequence[Violation], subject: str = 'object'):
        self.violations = tuple(violations)
        self.subject = subject
        count = len(self.violations)
        header = f'{subject} violates {count} invariant' + ('s' if count != 1 else '')
        super().__init__(f'{header}:\n{format_violation_list(self.violations)}'.rstrip())


class ScenarioParseError(NetEfficacyError):
    """The scenario file is not well-formed. ``line`` and ``column`` are 1-based."""

    kind = 'parse'

    def __init__(self, message: str, line: int | None = None, column: int | None = None, source: str = '<scenario>'):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        location = source if line is None else f'{source}:{line}:{column}'
        super().__init__(f'{location}: {message}')


class MissingSectionError(NetEfficacyError):
    """A command needs a scenario section that the scenario doesn't define."""

    kind = 'usage'

    def __init__(self, section: str, command: str | None = None):
        self.section = section
        self.command = command
        needed_by = f' (needed by `{command}`)' if command else ''
        super().__init__(f'the scenario has no `{section}` section{needed_by}')
