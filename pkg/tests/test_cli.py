from __future__ import annotations

import json

import pytest

from netefficacy import montecarlo
from netefficacy._cli import main
from netefficacy._cli import requested_format
from netefficacy.scenario import bundled_scenarios
from netefficacy.scenario import parse_scenario
from tests.util import parametrize


def invoke(runner, *args, **kwargs):
    return runner.invoke(main, [str(a) for a in args], **kwargs)


def json_output(result):
    assert result.exit_code == 0, result.stderr
    return json.loads(result.stdout)


def test_help_lists_the_commands(runner):
    result = invoke(runner, '--help')
    assert result.exit_code == 0
    for name in ('efficacy', 'hetnet', 'plan-coverage', 'grow', 'simulate', 'compare-models', 'verify'):
        assert name in result.stdout


def test_command_help_shows_option_groups(runner):
    result = invoke(runner, 'verify', '--help')
    assert result.exit_code == 0
    assert 'Simulation:' in result.stdout
    assert 'Output:' in result.stdout


class TestEfficacy:
    def test_deficit(self, runner, bundled):
        data = json_output(invoke(runner, 'efficacy', '-s', bundled('deficit'), '-f', 'json'))
        assert data['command'] == 'efficacy'
        assert data['outputs']['efficacy'] == pytest.approx(90.0, abs=1e-12)
        assert data['outputs']['per_node'] == pytest.approx(0.3)
        assert data['inputs']['n_e'] == 300

    def test_shrink(self, runner, bundled):
        data = json_output(invoke(runner, 'efficacy', '-s', bundled('deficit'), '--shrink', 2, '-f', 'json'))
        assert data['outputs']['disconnect_n_e'] == 500
        assert data['outputs']['disconnect_efficacy'] == pytest.approx(250.0, abs=1e-12)

    def test_multipurpose(self, runner, bundled):
        data = json_output(invoke(runner, 'efficacy', '-s', bundled('multipurpose'), '-f', 'json'))
        assert data['outputs']['multipurpose_total'] == pytest.approx(95.0, abs=1e-12)
        assert data['outputs']['efficacy'] == pytest.approx(25.0, abs=1e-12)

    def test_human_output(self, runner, bundled):
        result = invoke(runner, 'efficacy', '-s', bundled('deficit'))
        assert result.exit_code == 0
        assert result.stdout.startswith('netefficacy efficacy\n')
        assert 'efficacy' in result.stdout and '90' in result.stdout

    def test_out_file(self, runner, bundled, tmp_path):
        out = tmp_path / 'report.json'
        result = invoke(runner, 'efficacy', '-s', bundled('deficit'), '-f', 'json', '-o', out)
        assert result.exit_code == 0
        assert result.stdout == ''
        assert json.loads(out.read_text())['outputs']['efficacy'] == pytest.approx(90.0)

    def test_missing_scenario_file(self, runner, tmp_path):
        result = invoke(runner, 'efficacy', '-s', tmp_path / 'nope.scenario')
        assert result.exit_code == 2


class TestHetnet:
    def test_cluster(self, runner, bundled):
        data = json_output(invoke(runner, 'hetnet', '-s', bundled('cluster'), '-f', 'json', '--offload', '2/3'))
        outputs = data['outputs']
        assert outputs['total'] == pytest.approx(1.8, abs=1e-12)
        assert outputs['preferred_share'] == pytest.approx(4 / 9, abs=1e-12)
        assert outputs['binding'] == 'default'
        assert outputs['dependent_capacity'] == pytest.approx(3.0, abs=1e-12)

    def test_simulate(self, runner, bundled):
        data = json_output(invoke(
            runner, 'hetnet', '-s', bundled('cluster'), '--simulate',
            '--attempts', 200_000, '--trials', 10, '-f', 'json',
        ))
        assert data['inputs']['attempts'] == 200_000
        assert data['diagnostics']['relative_gap'] < 0.01

    def test_simulate_without_preferred_capacity(self, runner, scenario_file):
        path = scenario_file("""
            system: {size: 900}
            overlays:
              fast:
                members: {range: [1, 600]}
            hetnet: {default_capacity: 1, preferred_capacity: 0, overlay: fast}
        """)
        data = json_output(invoke(
            runner, 'hetnet', '-s', path, '--simulate', '--attempts', 20_000, '--trials', 4, '-f', 'json',
        ))
        assert data['outputs']['total'] == 0.0
        assert data['diagnostics']['relative_gap'] == 0.0

    def test_missing_section(self, runner, bundled):
        result = invoke(runner, 'hetnet', '-s', bundled('deficit'), '-f', 'json')
        assert result.exit_code == 2
        error = json.loads(result.stderr)['error']
        assert error['kind'] == 'usage'
        assert '`hetnet`' in error['message']


class TestPlanCoverage:
    def test_cluster(self, runner):
        data = json_output(invoke(runner, 'plan-coverage', '--target', 3, '-f', 'json'))
        assert data['outputs']['coverage'] == pytest.approx(0.8164966, abs=5e-7)
        assert data['diagnostics']['achieved_total'] == pytest.approx(3.0, rel=1e-9)

    def test_default_capacity_from_scenario(self, runner, scenario_file):
        path = scenario_file("""
            system: {size: 10}
            hetnet: {default_capacity: 2, preferred_capacity: unlimited, coverage: 0.5}
        """)
        data = json_output(invoke(runner, 'plan-coverage', '-s', path, '--target', 8, '-f', 'json'))
        assert data['inputs']['default_capacity'] == 2.0
        assert data['outputs']['preferred_share'] == pytest.approx(0.75)

    def test_csv(self, runner):
        result = invoke(runner, 'plan-coverage', '--target', 3, '-f', 'csv')
        lines = result.stdout.splitlines()
        assert lines[0] == 'key,value'
        assert lines[1].startswith('coverage,0.81649658')

    def test_unreachable_target(self, runner):
        result = invoke(runner, 'plan-coverage', '--target', 0.5, '-f', 'json')
        assert result.exit_code == 3
        error = json.loads(result.stderr)['error']
        assert error['kind'] == 'precondition'
        assert error['exit_code'] == 3
        assert result.stdout == ''

    def test_unreachable_target_human(self, runner):
        result = invoke(runner, 'plan-coverage', '--target', 0.5)
        assert result.exit_code == 3
        assert 'Error: ' in result.stderr
        assert 'already achievable' in result.stderr

    def test_target_is_required(self, runner):
        assert invoke(runner, 'plan-coverage').exit_code == 2


class TestGrow:
    def test_from_options(self, runner):
        result = invoke(
            runner, 'grow', '--n-omega', 100, '--start', 10, '--stop', 150, '--step', 10, '-f', 'csv',
        )
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == 'step,n_e,n_omega,efficacy'
        assert len(lines) == 16
        assert lines[10] == '9,100,100,100.0'
        assert lines[-1] == '14,150,150,150.0'

    def test_from_scenario(self, runner, bundled):
        data = json_output(invoke(runner, 'grow', '-s', bundled('growth'), '-f', 'json'))
        assert data['outputs']['saturated_at_step'] == 9
        assert data['outputs']['final_efficacy'] == 150.0
        assert data['series']['header'] == ['step', 'n_e', 'n_omega', 'efficacy']

    def test_three_points(self, runner):
        result = invoke(runner, 'grow', '--n-omega', 10, '--start', 1, '--stop', 3, '-f', 'csv')
        assert result.stdout.splitlines() == [
            'step,n_e,n_omega,efficacy', '0,1,10,0.1', '1,2,10,0.4', '2,3,10,0.8999999999999999',
        ]

    @pytest.mark.parametrize('args', [['--n-omega', '100'], [], ['--start', '1', '--stop', '3']])
    def test_incomplete_schedule(self, runner, args):
        assert invoke(runner, 'grow', *args).exit_code == 2

    def test_scenario_without_trajectory(self, runner, bundled):
        assert invoke(runner, 'grow', '-s', bundled('deficit')).exit_code == 2

    def test_bad_range(self, runner):
        result = invoke(runner, 'grow', '--n-omega', 10, '--start', 5, '--stop', 1)
        assert result.exit_code == 3


class TestSimulate:
    def test_deficit(self, runner, bundled):
        data = json_output(invoke(
            runner, 'simulate', '-s', bundled('deficit'), '--attempts', 100_000, '--trials', 10, '-f', 'json',
        ))
        assert data['diagnostics']['analytic'] == pytest.approx(90.0)
        assert data['diagnostics']['gap_in_stderr'] < 4
        assert len(data['series']['rows']) == 10

    def test_topologies(self, runner, bundled):
        data = json_output(invoke(
            runner, 'simulate', '-s', bundled('topology'), '--against', 'complete', '-f', 'json',
        ))
        assert data['outputs']['identical'] is True
        assert data['outputs']['max_gap'] == 0.0

    def test_unknown_overlay(self, runner, bundled):
        result = invoke(runner, 'simulate', '-s', bundled('topology'), '--against', 'ring')
        assert result.exit_code == 2
        assert 'ring' in result.stderr

    def test_shrink_and_against_are_exclusive(self, runner, bundled):
        result = invoke(runner, 'simulate', '-s', bundled('topology'), '--against', 'complete', '--shrink', 2)
        assert result.exit_code == 2

    def test_seed_from_the_environment(self, runner, bundled):
        result = invoke(
            runner, 'simulate', '-s', bundled('topology'), '-f', 'json', '--attempts', 1000,
            env={'NETEFFICACY_SEED': '0x10'},
        )
        assert json_output(result)['inputs']['seed'] == 16


class TestCompareModels:
    def test_sizes_and_split(self, runner):
        result = invoke(runner, 'compare-models', '--size', 2, '--size', 11, '--split', 2, '-f', 'csv')
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == 'n,link_value,node_value,n_log_n,link_share,link_ratio,per_resource_gain'
        assert lines[2].startswith('11,110,11,')

    def test_bridge_check(self, runner, bundled):
        data = json_output(invoke(runner, 'compare-models', '-s', bundled('topology'), '-f', 'json'))
        assert data['outputs']['bridge_check'] is True
        assert data['outputs']['bridge_link_value'] == 0.0
        assert data['series']['rows'][0][:3] == [10, 90, 10]

    def test_needs_a_size(self, runner):
        assert invoke(runner, 'compare-models').exit_code == 2


class TestVerify:
    ARGS = ('--attempts', 200_000, '--trials', 10, '-f', 'json')

    def test_pass(self, runner, bundled):
        data = json_output(invoke(runner, 'verify', '-s', bundled('deficit'), *self.ARGS))
        assert data['outputs']['verdict'] == 'PASS'
        assert data['outputs']['analytic'] == pytest.approx(90.0, abs=1e-12)
        assert data['diagnostics']['enumeration_error'] <= 1e-12

    def test_reports_are_byte_identical(self, runner, bundled):
        first = invoke(runner, 'verify', '-s', bundled('deficit'), *self.ARGS, '--workers', 1)
        second = invoke(runner, 'verify', '-s', bundled('deficit'), *self.ARGS, '--workers', 4)
        assert first.exit_code == second.exit_code == 0
        assert first.stdout_bytes == second.stdout_bytes

    def test_fail(self, runner, bundled):
        result = invoke(runner, 'verify', '-s', bundled('deficit'), *self.ARGS, '--tolerance', 1e-9)
        assert result.exit_code == 4
        assert json.loads(result.stdout)['outputs']['verdict'] == 'FAIL'

    def test_enumeration_off_the_closed_form_fails(self, runner, bundled, monkeypatch):
        monkeypatch.setattr(montecarlo, 'enumerate_contacts', lambda *args: 91.0)
        result = invoke(runner, 'verify', '-s', bundled('deficit'), *self.ARGS, '--tolerance', 1e9)
        assert result.exit_code == 4
        data = json.loads(result.stdout)
        assert data['outputs']['verdict'] == 'FAIL'
        assert data['diagnostics']['enumeration_error'] == pytest.approx(1.0, abs=1e-9)

    def test_grid(self, runner):
        data = json_output(invoke(runner, 'verify', '--grid', 30, '-f', 'json'))
        assert data['outputs'] == {'grid_mismatches': 0, 'verdict': 'PASS'}

    def test_needs_a_scenario_or_grid(self, runner):
        assert invoke(runner, 'verify').exit_code == 2

    def test_invalid_scenario(self, runner, scenario_file):
        path = scenario_file("""
            system: {size: 10}
            hetnet: {default_capacity: 1, preferred_capacity: 2, coverage: 1.2}
        """)
        result = invoke(runner, 'verify', '-s', path, '-f', 'json')
        assert result.exit_code == 3
        error = json.loads(result.stderr)['error']
        assert error['kind'] == 'validation'
        assert [v['path'] for v in error['violations']] == ['hetnet.coverage']

    def test_malformed_scenario(self, runner, scenario_file):
        path = scenario_file('system:\n  size: 3\n  bogus: 1\n')
        result = invoke(runner, 'verify', '-s', path)
        assert result.exit_code == 3
        assert ':3:3: unknown key `bogus`' in result.stderr


def _bundled_commands():
    sim = ('--attempts', 20_000, '--trials', 10)
    for path in bundled_scenarios():
        scenario = parse_scenario(path)
        commands = [
            ('efficacy',), ('plan-coverage', '--target', 4), ('simulate', *sim),
            ('compare-models',), ('verify', *sim, '--tolerance', 6),
        ]
        if scenario.hetnet is not None:
            commands.append(('hetnet',))
        if scenario.trajectory is not None:
            commands.append(('grow',))
        for command, *args in commands:
            yield pytest.param(path, command, args, id=f'{path.stem}-{command}')


@pytest.mark.parametrize(['path', 'command', 'args'], _bundled_commands())
def test_bundled_scenarios(runner, path, command, args):
    data = json_output(invoke(runner, command, '-s', path, *args, '-f', 'json'))
    assert data['command'] == command


class TestUsageErrors:
    def test_missing_option_as_json(self, runner):
        result = invoke(runner, 'plan-coverage', '-f', 'json')
        assert result.exit_code == 2
        error = json.loads(result.stderr)['error']
        assert error['kind'] == 'usage'
        assert error['exit_code'] == 2
        assert '--target' in error['message']

    def test_bad_value_as_json(self, runner, bundled):
        result = invoke(runner, 'simulate', '-s', bundled('topology'), '--seed', 'abc', '--format=json')
        assert result.exit_code == 2
        assert json.loads(result.stderr)['error']['kind'] == 'usage'

    def test_human(self, runner):
        result = invoke(runner, 'plan-coverage')
        assert result.exit_code == 2
        assert 'Error' in result.stderr
        assert not result.stderr.startswith('{')


@parametrize(
    ['argv', 'expected'],
    [['efficacy', '-f', 'json'], 'json'],
    [['efficacy', '-fjson'], 'json'],
    [['efficacy', '--format=csv', '-f', 'json'], 'json'],
    [['efficacy', '--', '-f', 'json'], 'human'],
    [['efficacy'], 'human'],
)
def test_requested_format(argv, expected, monkeypatch):
    monkeypatch.delenv('NETEFFICACY_FORMAT', raising=False)
    assert requested_format(argv) == expected


def test_requested_format_from_the_environment(monkeypatch):
    monkeypatch.setenv('NETEFFICACY_FORMAT', 'json')
    assert requested_format(['plan-coverage']) == 'json'
