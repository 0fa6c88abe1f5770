"""Generic utilities."""
from __future__ import annotations

import math
from collections.abc import Iterable
from typing import Any

from netefficacy.exceptions import PreconditionError


class FrozenSpaceMeta(type):
    def __setattr__(cls, key: str, value: Any) -> None:
        raise Exception("you can't set attributes on this class")


class FrozenSpace(metaclass=FrozenSpaceMeta):
    """A class used just as frozen namespace for constants."""

    def __init__(self) -> None:
        raise Exception("this class is just a namespace for constants, it's not instantiable.")


class Tolerance(FrozenSpace):
    """Absolute tolerances used when comparing floating point results."""

    exact = 1e-12
    """For closed-form formulas evaluated directly."""

    composed = 1e-9
    """For round-trips composed of two or more formulas."""


def class_name(obj: object) -> str:
    return obj.__class__.__name__


def require(condition: bool, msg: str) -> None:
    """Raise :exc:`PreconditionError` with ``msg`` unless ``condition`` holds."""
    if not condition:
        raise PreconditionError(msg)


def check_count(value: Any, arg_name: str, minimum: int = 0) -> None:
    error_type: type[Exception] | None = None
    if isinstance(value, bool) or not isinstance(value, int):
        error_type = TypeError
    elif value < minimum:
        error_type = PreconditionError
    if error_type:
        raise error_type(f'argument `{arg_name}` should be an integer >= {minimum}; it is {value!r}')


def check_rate(value: Any, arg_name: str = 'alpha') -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise PreconditionError(f'argument `{arg_name}` should be a finite rate > 0; it is {value!r}')


def close_to(a: float, b: float, tol: float = Tolerance.exact) -> bool:
    return abs(a - b) <= tol


def indent_lines(lines: Iterable[str], width: int = 2) -> list[str]:
    spaces = ' ' * width
    return [spaces + line for line in lines]


def make_repr(obj: Any, *args: Any, _line_len: int = 60, _indent: int = 2, **kwargs: Any) -> str:
    """
    Generate repr(obj).

    :param obj:
        object to represent
    :param args:
        positional arguments in the repr
    :param _line_len:
        if the repr length exceeds this, arguments will be on their own line;
        if negative, the repr will be in a single line regardless of its length
    :param _indent:
        indentation width of arguments in case they are shown in their own line
    :param kwargs:
        keyword arguments in the repr
    :return: str
    """
    cls_name = obj.__class__.__name__
    arglist = [
        *(repr(arg) for arg in args),
        *(f'{key}={value!r}' for key, value in kwargs.items()),
    ]
    len_arglist = sum(len(s) for s in arglist)
    total_len = len(cls_name) + len_arglist + 2 * len(arglist)
    if 0 <= _line_len < total_len:
        lines = indent_lines(arglist, width=_indent)
        args_text = ',\n'.join(lines)
        return f'{cls_name}(\n{args_text}\n)'
    else:
        args_text = ', '.join(arglist)
        return f'{cls_name}({args_text})'


def format_number(value: float, digits: int = 6) -> str:
    """Round ``value`` to ``digits`` significant digits for human output."""
    if isinstance(value, bool) or isinstance(value, int):
        return str(value)
    return format(value, f'.{digits}g')
