from __future__ import annotations

import math

import pytest

from netefficacy._util import check_count
from netefficacy._util import check_rate
from netefficacy._util import close_to
from netefficacy._util import format_number
from netefficacy._util import make_repr
from netefficacy._util import require
from netefficacy._util import Tolerance
from netefficacy.exceptions import PreconditionError
from tests.util import parametrize


def test_make_repr():
    expected_repr = "list('arg', alpha=1.5, n_omega=900)"
    n = len(expected_repr)
    r = make_repr([], 'arg', alpha=1.5, n_omega=900, _line_len=n)
    assert r == expected_repr

    r = make_repr([], 'arg', alpha=1.5, n_omega=900, _line_len=n - 1, _indent=3)
    assert r == ('list(\n'
                 "   'arg',\n"
                 '   alpha=1.5,\n'
                 '   n_omega=900\n'
                 ')')


def test_check_count():
    check_count(0, 'n_e')
    check_count(1, 'n_omega', minimum=1)
    with pytest.raises(PreconditionError, match='`n_omega` should be an integer >= 1'):
        check_count(0, 'n_omega', minimum=1)
    with pytest.raises(PreconditionError):
        check_count(-1, 'n_e')
    with pytest.raises(TypeError):
        check_count(None, 'n_e')
    with pytest.raises(TypeError):
        check_count(1.0, 'n_e')
    with pytest.raises(TypeError):
        check_count(True, 'n_e')


@parametrize('rate', 0, -1, math.inf, math.nan, '1')
def test_check_rate_rejects(rate):
    with pytest.raises(PreconditionError, match='`alpha` should be a finite rate > 0'):
        check_rate(rate)


def test_check_rate_accepts_ints():
    check_rate(1)
    check_rate(1e-9)


def test_require():
    require(True, 'never shown')
    with pytest.raises(PreconditionError, match='^boom$'):
        require(False, 'boom')


def test_close_to():
    assert close_to(0.1 + 0.2, 0.3)
    assert not close_to(1.0, 1.0 + 1e-9)
    assert close_to(1.0, 1.0 + 1e-10, Tolerance.composed)


def test_tolerance_is_a_frozen_namespace():
    assert Tolerance.composed == 1e-9
    with pytest.raises(Exception):
        Tolerance.exact = 0.0
    with pytest.raises(Exception):
        Tolerance()


@parametrize(
    ['value', 'expected'],
    [3, '3'],
    [2 / 3, '0.666667'],
    [1.8, '1.8'],
    [math.inf, 'inf'],
    [123456789.0, '1.23457e+08'],
)
def test_format_number(value, expected):
    assert format_number(value) == expected
