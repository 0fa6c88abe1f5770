from __future__ import annotations

import textwrap
from contextlib import contextmanager
from pathlib import Path

import pytest

from netefficacy import bind_overlay
from netefficacy import InformationSystem
from netefficacy import NetworkOverlay


def parametrize(argnames, *argvalues, **kwargs):
    return pytest.mark.parametrize(argnames, argvalues, **kwargs)


def should_raise(expected_exception, *, when, **kwargs):
    if when:
        return pytest.raises(expected_exception, **kwargs)

    @contextmanager
    def manager():
        yield

    return manager()


def make_overlay(n_e: int, n_omega: int) -> tuple[InformationSystem, NetworkOverlay]:
    """A system {1..n_omega} and an overlay bound to it with effective set {1..n_e}."""
    system = InformationSystem.of_size(n_omega)
    return system, bind_overlay(system, range(1, n_e + 1))


def write_scenario(directory: Path, text: str, name: str = 'test.scenario') -> Path:
    path = directory / name
    path.write_text(textwrap.dedent(text).lstrip(), encoding='utf-8')
    return path
