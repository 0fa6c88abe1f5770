from __future__ import annotations
__all__ = ['Flow', 'MISSING', 'NodeId', 'Schedule', 'SchedulePoint']

from collections.abc import Sequence
from enum import Enum
from typing import Tuple


# PEP-blessed solution for defining a Singleton type:
# https://peps.python.org/pep-0484/#support-for-singleton-types-in-unions
class _Missing(Enum):
    flag = 'Missing'


MISSING = _Missing.flag
"""Sentinel returned when a checked object has no such field. None can't play
this role since it's a valid value of optional fields."""

NodeId = int
"""Opaque unsigned integer identifying a node of an information system."""

Flow = float
"""A flow (capacity, efficacy, throughput) in the caller's units, e.g. Tb/s."""

SchedulePoint = Tuple[int, int]
"""An ``(n_e, n_omega)`` pair of a growth schedule."""

Schedule = Sequence[SchedulePoint]
