from __future__ import annotations

import dataclasses as dc
import math

import pytest

from netefficacy._model import InformationSystem
from netefficacy.exceptions import ValidationError
from netefficacy.exceptions import Violation
from netefficacy.invariants import All
from netefficacy.invariants import at_least
from netefficacy.invariants import Each
from netefficacy.invariants import ErrorFmt
from netefficacy.invariants import Field
from netefficacy.invariants import finite
from netefficacy.invariants import InRange
from netefficacy.invariants import non_negative
from netefficacy.invariants import not_empty
from netefficacy.invariants import positive
from netefficacy.invariants import Predicate
from netefficacy.invariants import register
from netefficacy.invariants import rules_for
from netefficacy.invariants import SubsetOf
from netefficacy.invariants import SumsTo
from netefficacy.invariants import unsigned_int
from netefficacy.invariants import ValidationContext
from netefficacy.invariants import validated_by
from netefficacy.invariants.common import join_path
from netefficacy.invariants.common import preview
from tests.util import parametrize


@dc.dataclass
class Point:
    x: float
    y: float | None = None


class TestInRange:
    @parametrize(
        ['value', 'holds'],
        pytest.param(0.0, True, id='lower bound'),
        pytest.param(0.5, True, id='inside'),
        pytest.param(1.0, False, id='open upper bound'),
        pytest.param(-1e-300, False, id='below'),
        pytest.param(math.nan, False, id='nan'),
    )
    def test_half_open_interval(self, value, holds):
        assert InRange(0.0, 1.0, hi_closed=False).holds(value) == holds

    def test_error_message(self):
        [violation] = InRange(0.0, 1.0, hi_closed=False).violations(1.2, 'hetnet.coverage')
        assert violation == Violation('hetnet.coverage', 'out of range: 1.2 is not in [0, 1)')

    def test_rejects_non_numbers(self):
        assert not positive.holds('1')
        assert not positive.holds(True)

    def test_description_of_infinite_bounds(self):
        assert positive.description() == 'in (0, ∞]'


def test_all_reports_violations_of_every_operand():
    inv = Field('x', positive) & Field('y', positive)
    found = inv.violations(Point(-1, -2), 'p')
    assert [v.path for v in found] == ['p.x', 'p.y']


def test_all_flattens_nested_all():
    a, b, c = positive, finite, non_negative
    assert (All(a, b) & All(c)).invariants == (a, b, c)
    assert (All(a) & b).invariants == (a, b)


class TestField:
    def test_missing_field(self):
        assert Field('z', positive).violations(Point(1), 'p') == [Violation('p.z', 'is missing')]

    def test_optional_field_skips_none(self):
        assert Field('y', positive, optional=True).holds(Point(1))
        assert not Field('y', positive, optional=True).holds(Point(1, -1))

    def test_works_on_mappings(self):
        assert Field('rate', positive).violations({'rate': 0}) == [
            Violation('rate', 'out of range: 0 is not in (0, ∞]')
        ]


def test_each_locates_items_by_index():
    found = Each(Field('x', positive)).violations([Point(1), Point(0), Point(-1)], 'points')
    assert [v.path for v in found] == ['points[1].x', 'points[2].x']


def test_rephrased_error():
    inv = positive.rephrased(error=f'{ErrorFmt.path}: rate {ErrorFmt.error}')
    [violation] = inv.violations(-1, 'demand.rate')
    assert violation.message == 'demand.rate: rate out of range: -1 is not in (0, ∞]'
    assert inv.description() == positive.description()


def test_rephrased_error_with_function():
    inv = positive.rephrased(error=lambda v: v.message.upper())
    assert inv.violations(0)[0].message.startswith('OUT OF RANGE')


def test_predicate_receives_context():
    system = InformationSystem.of_size(3)
    inv = Predicate(lambda value, ctx: value in ctx.system.nodes, 'in Ω', error='not in Ω')
    assert inv.holds(2, ValidationContext(system))
    assert inv.violations(4, 'node', ValidationContext(system)) == [Violation('node', 'not in Ω')]


def test_predicate_default_error():
    inv = Predicate(lambda value, ctx: False, 'never')
    assert inv.violations(None)[0].message == 'must satisfy: never'


def test_sums_to():
    inv = SumsTo(1.0, 1e-9)
    assert inv.holds([0.25, 0.25, 0.5])
    assert inv.holds([0.1] * 10)
    [violation] = inv.violations([0.5, 0.4], 'probabilities')
    assert violation.message.startswith('probability sum is 0.9')


def test_subset_of():
    inv = SubsetOf(lambda value, ctx: ctx.system.nodes if ctx.system else None, 'Ω')
    ctx = ValidationContext(InformationSystem.of_size(5))
    assert inv.holds({1, 5}, ctx)
    assert inv.violations({0, 6, 7}, 'effective', ctx) == [
        Violation('effective', 'not a subset of Ω: {0, 6, 7} outside')
    ]
    # without a system there's nothing to check against
    assert inv.holds({0, 6, 7})


@parametrize(
    ['inv', 'value', 'holds'],
    [unsigned_int, 0, True],
    [unsigned_int, -1, False],
    [unsigned_int, True, False],
    [unsigned_int, 1.0, False],
    [not_empty, [], False],
    [not_empty, [1], True],
    [finite, math.inf, False],
    [at_least(1), 1, True],
    [at_least(1), 0, False],
)
def test_instances(inv, value, holds):
    assert inv.holds(value) == holds


def test_at_least_error():
    assert at_least(2).violations(1, 'trials') == [Violation('trials', 'must be >= 2')]


def test_check_raises_validation_error_with_all_violations():
    inv = Field('x', positive) & Field('y', positive)
    with pytest.raises(ValidationError) as info:
        inv.check(Point(0, 0))
    assert [v.path for v in info.value.violations] == ['x', 'y']
    assert info.value.subject == 'Point'
    assert 'violates 2 invariants' in str(info.value)


class TestRegistry:
    def test_validated_by_registers_the_class(self):
        inv = Field('x', positive)

        @validated_by(inv)
        class Registered:
            x = 1

        class Child(Registered):
            pass

        assert rules_for(Registered()) is inv
        assert rules_for(Child()) is inv
        assert rules_for(object()) is None

    def test_registering_twice_raises(self):
        class Twice:
            pass

        register(Twice, positive)
        with pytest.raises(ValueError):
            register(Twice, positive)


def test_join_path():
    assert join_path('', 'rate') == 'rate'
    assert join_path('hetnet', 'coverage') == 'hetnet.coverage'
    assert join_path('events', 1) == 'events[1]'


def test_preview_truncates():
    assert preview(range(10, 0, -1), limit=3) == '{1, 2, 3, ... (7 more)}'
