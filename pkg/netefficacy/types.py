"""
Parameter types of the command line interface.
"""
from __future__ import annotations

import math
from fractions import Fraction as _Fraction
from gettext import gettext as _
from typing import Any
from typing import TYPE_CHECKING

from click.types import ParamType

from netefficacy.montecarlo import MAX_SEED

if TYPE_CHECKING:
    from click import Context
    from click import Parameter


class SeedParamType(ParamType):
    """
    An unsigned 64-bit integer, in decimal or hexadecimal (``0x`` prefix).
    Integers (e.g. values coming from a scenario) are accepted as they are.
    """
    name = 'seed'

    def convert(self, value: Any, param: Parameter | None, ctx: Context | None) -> int:
        if isinstance(value, int) and not isinstance(value, bool):
            seed = value
        else:
            try:
                seed = int(str(value).strip(), 0)
            except ValueError:
                self.fail(_(f'{value!r} is not a valid integer'), param, ctx)
        if not 0 <= seed <= MAX_SEED:
            self.fail(_(f'{value} is not an unsigned 64-bit integer'), param, ctx)
        return seed

    def __repr__(self) -> str:
        return 'SEED'


class FlowParamType(ParamType):
    """A positive, finite flow (capacity, throughput) in the scenario's units."""
    name = 'flow'

    def convert(self, value: Any, param: Parameter | None, ctx: Context | None) -> float:
        try:
            flow = float(value)
        except (TypeError, ValueError):
            self.fail(_(f'{value!r} is not a valid number'), param, ctx)
        if not (math.isfinite(flow) and flow > 0):
            self.fail(_(f'{value} is not a positive finite flow'), param, ctx)
        return flow

    def __repr__(self) -> str:
        return 'FLOW'


class FractionParamType(ParamType):
    """
    A real in ``[0, 1)``, written as a decimal (``0.5``) or as a ratio (``2/3``).
    Ratios are converted exactly before being rounded to a float.
    """
    name = 'fraction'

    def convert(self, value: Any, param: Parameter | None, ctx: Context | None) -> float:
        if isinstance(value, float):
            x = value
        else:
            try:
                x = float(_Fraction(str(value).strip()))
            except (ValueError, ZeroDivisionError):
                self.fail(_(f'{value!r} is not a valid fraction (e.g. 0.5 or 2/3)'), param, ctx)
        if not 0 <= x < 1:
            self.fail(_(f'{value} is not in [0, 1)'), param, ctx)
        return x

    def __repr__(self) -> str:
        return 'FRACTION'


class ShrinkFactorParamType(ParamType):
    """A real number >= 1, the factor a network shrinks by."""
    name = 'factor'

    def convert(self, value: Any, param: Parameter | None, ctx: Context | None) -> float:
        try:
            x = float(value)
        except (TypeError, ValueError):
            self.fail(_(f'{value!r} is not a valid number'), param, ctx)
        if not (math.isfinite(x) and x >= 1):
            self.fail(_(f'{value} is not a finite factor >= 1'), param, ctx)
        return x

    def __repr__(self) -> str:
        return 'FACTOR'


Seed = SeedParamType()
Flow = FlowParamType()
Fraction = FractionParamType()
ShrinkFactor = ShrinkFactorParamType()
