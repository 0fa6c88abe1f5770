from __future__ import annotations

from functools import partial

from click.testing import CliRunner
from pytest import fixture

from netefficacy import warnings as switches
from netefficacy.scenario import BUNDLED_DIR
from tests.util import write_scenario


@fixture()
def runner():
    try:
        runner = CliRunner(mix_stderr=False)
    except TypeError:  # click >= 8.2 always keeps stderr apart
        runner = CliRunner()
    runner.invoke = partial(runner.invoke, catch_exceptions=False)
    return runner


@fixture(scope='session')
def bundled():
    def get_path(name: str):
        return BUNDLED_DIR / f'{name}.scenario'

    return get_path


@fixture()
def scenario_file(tmp_path):
    """Write the (dedented) scenario text to a file in tmp_path and return its path."""
    return partial(write_scenario, tmp_path)


@fixture()
def warning_switches():
    """Restore the warning switches of netefficacy after the test."""
    saved = {name: getattr(switches, name) for name in ('exclude_self_deviation', 'preferred_capacity_binding')}
    yield switches
    for name, value in saved.items():
        setattr(switches, name, value)
