"""
The ``netefficacy`` command line interface.

Option values are resolved in this order: explicit option, ``NETEFFICACY_*``
environment variable, scenario file, built-in default. Reports go to stdout
(or ``--out``); logs and warnings go to stderr.
"""
from __future__ import annotations

import dataclasses as dc
import functools
import json
import logging
import math
import os
from collections.abc import Callable
from collections.abc import Sequence
from pathlib import Path
from typing import Any
from typing import IO
from typing import TypeVar

import click
import cloup
from cloup.constraints import all_or_none
from cloup.constraints import mutually_exclusive
from cloup.constraints import RequireAtLeast

from netefficacy import analytic
from netefficacy import montecarlo
from netefficacy import types
from netefficacy import valuemodels
from netefficacy._model import EfficacyReport
from netefficacy._model import HetNetConfig
from netefficacy._model import TargetRule
from netefficacy._util import Tolerance
from netefficacy.exceptions import MissingSectionError
from netefficacy.exceptions import NetEfficacyError
from netefficacy.exceptions import PreconditionError
from netefficacy.exceptions import ScenarioParseError
from netefficacy.exceptions import ValidationError
from netefficacy.report import emit
from netefficacy.report import FORMATS
from netefficacy.report import Report
from netefficacy.report import Series
from netefficacy.scenario import parse_scenario
from netefficacy.scenario import Scenario

logger = logging.getLogger(__name__)

F = TypeVar('F', bound=Callable[..., Any])

EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_RUNTIME = 4


class CommandError(click.ClickException):
    """A library error translated for the command line. With ``--format json``
    it's shown on stderr as a JSON object instead of plain text."""

    def __init__(self, error: Exception, exit_code: int, fmt: str = 'human', kind: str | None = None):
        message = error.format_message() if isinstance(error, click.ClickException) else str(error)
        super().__init__(message)
        self.error = error
        self.exit_code = exit_code
        self.fmt = fmt
        self.kind = kind or getattr(error, 'kind', 'runtime')

    def to_dict(self) -> dict[str, Any]:
        violations = getattr(self.error, 'violations', ())
        return {'error': {
            'kind': self.kind,
            'message': self.message,
            'violations': [{'path': v.path, 'message': v.message} for v in violations],
            'exit_code': self.exit_code,
        }}

    def show(self, file: IO[Any] | None = None) -> None:
        if self.fmt != 'json':
            super().show(file)
            return
        click.echo(json.dumps(self.to_dict(), sort_keys=True), err=True)


class VerificationFailed(click.ClickException):
    exit_code = EXIT_RUNTIME


def reports_errors(f: F) -> F:
    """Translate library errors raised by a command into :class:`CommandError`."""

    @functools.wraps(f)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        fmt = kwargs.get('fmt', 'human')
        try:
            return f(*args, **kwargs)
        except click.ClickException:
            raise
        except MissingSectionError as exc:
            raise CommandError(exc, EXIT_USAGE, fmt) from exc
        except (ValidationError, ScenarioParseError, PreconditionError) as exc:
            raise CommandError(exc, EXIT_INVALID, fmt) from exc
        except (NetEfficacyError, OSError, ArithmeticError, ValueError) as exc:
            logger.debug('command failed', exc_info=True)
            raise CommandError(exc, EXIT_RUNTIME, fmt) from exc

    return wrapper  # type: ignore[return-value]


_ARGV_KEY = 'netefficacy.argv'


def requested_format(argv: Sequence[str]) -> str:
    """The ``--format`` given in ``argv`` (the last one wins), else the one
    in ``NETEFFICACY_FORMAT``, else ``human``. Usage errors are raised before
    the option is parsed, so it is read from the raw arguments."""
    fmt = os.environ.get('NETEFFICACY_FORMAT', 'human')
    args = iter(argv)
    for arg in args:
        if arg == '--':
            break
        if arg in ('-f', '--format'):
            fmt = next(args, fmt)
        elif arg.startswith('--format='):
            fmt = arg.partition('=')[2]
        elif arg.startswith('-f') and not arg.startswith('--'):
            fmt = arg[2:]
    return fmt


class NetEfficacyGroup(cloup.Group):
    """A group reporting the usage errors of its commands (missing options,
    bad values, violated constraints) as JSON when ``--format json`` is asked."""

    def parse_args(self, ctx: click.Context, args: list[str]) -> list[str]:
        ctx.meta[_ARGV_KEY] = list(args)
        return super().parse_args(ctx, args)

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except click.UsageError as exc:
            if requested_format(ctx.meta.get(_ARGV_KEY, ())) != 'json':
                raise
            raise CommandError(exc, EXIT_USAGE, 'json', kind='usage') from exc


class _CliLogHandler(logging.StreamHandler):  # type: ignore[type-arg]
    pass


def _configure_logging(verbosity: int) -> None:
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(verbosity, 2)]
    package_logger = logging.getLogger('netefficacy')
    for handler in list(package_logger.handlers):
        if isinstance(handler, _CliLogHandler):
            package_logger.removeHandler(handler)
    handler = _CliLogHandler()  # bound to the current sys.stderr
    handler.setFormatter(logging.Formatter('%(levelname)s %(name)s: %(message)s'))
    package_logger.addHandler(handler)
    package_logger.setLevel(level)


# Options shared by several commands. They're factories: every command gets
# its own option objects.

def scenario_option(required: bool = True) -> Callable[[F], F]:
    return cloup.option(
        '-s', '--scenario', 'scenario_path', required=required,
        type=cloup.file_path(exists=True, readable=True),
        help='Scenario file (YAML).',
    )


def simulation_option_group() -> Callable[[F], F]:
    return cloup.option_group(
        'Simulation',
        cloup.option('--seed', type=types.Seed, envvar='NETEFFICACY_SEED',
                     help='Unsigned 64-bit seed, decimal or 0x-hex.  [default: scenario or 0]'),
        cloup.option('--attempts', type=click.IntRange(min=1), envvar='NETEFFICACY_ATTEMPTS',
                     help='Total contact attempts.  [default: scenario or 100000]'),
        cloup.option('--trials', type=click.IntRange(min=1), envvar='NETEFFICACY_TRIALS',
                     help='Independent trials used to estimate the standard error.  [default: scenario or 10]'),
        cloup.option('--workers', type=click.IntRange(min=1), envvar='NETEFFICACY_WORKERS',
                     help="Threads running the trials; results don't depend on it.  [default: scenario or 1]"),
    )


def output_option_group() -> Callable[[F], F]:
    return cloup.option_group(
        'Output',
        cloup.option('-f', '--format', 'fmt', type=click.Choice(FORMATS), default='human',
                     show_default=True, envvar='NETEFFICACY_FORMAT', help='Report format.'),
        cloup.option('-o', '--out', type=cloup.file_path(), help='Write the report here instead of stdout.'),
    )


def _load(scenario_path: Path | None) -> Scenario | None:
    return parse_scenario(scenario_path) if scenario_path is not None else None


def _sim_config(
    scenario: Scenario | None, seed: int | None, attempts: int | None, trials: int | None, workers: int | None,
) -> montecarlo.SimConfig:
    base = scenario.sim_config if scenario is not None else montecarlo.SimConfig()
    given = {'seed': seed, 'attempts': attempts, 'trials': trials, 'workers': workers}
    return dc.replace(base, **{key: value for key, value in given.items() if value is not None})


def _sim_inputs(cfg: montecarlo.SimConfig) -> dict[str, Any]:
    # not workers: it never changes the results
    return {'seed': cfg.seed, 'attempts': cfg.attempts, 'trials': cfg.trials}


def _write(report: Report, fmt: str, out: Path | None) -> None:
    data = emit(report, fmt)
    if out is None:
        click.echo(data, nl=False)
    else:
        out.write_bytes(data)
        logger.info('report written to %s', out)


def _relative_gap(estimate: float, exact: float) -> float | None:
    """``None`` when the exact value is 0 and the estimate isn't."""
    if exact > 0:
        return abs(estimate - exact) / exact
    return 0.0 if estimate == exact else None


def _trial_rows(result: montecarlo.SimResult) -> list[tuple[int, float, float]]:
    return [
        (result.first_trial + i, rate, throughput)
        for i, (rate, throughput) in enumerate(zip(result.per_trial, result.trial_throughputs))
    ]


@cloup.group(
    'netefficacy',
    cls=NetEfficacyGroup,
    context_settings=cloup.Context.settings(
        auto_envvar_prefix='NETEFFICACY',
        help_option_names=['-h', '--help'],
        show_constraints=True,
        formatter_settings=cloup.HelpFormatter.settings(max_width=100),
    ),
)
@cloup.option('-v', '--verbose', count=True, help='Log progress on stderr (-v: info, -vv: debug).')
@cloup.version_option(package_name='netefficacy')
def main(verbose: int) -> None:
    """Efficacy of communication networks inside their information systems:
    closed-form results, Monte Carlo checks and value models."""
    _configure_logging(verbose)


@main.command('efficacy')
@cloup.option_group(
    'Scenario',
    scenario_option(),
    cloup.option('--shrink', type=types.ShrinkFactor,
                 help='Also report the disconnect experiment: keep 1/FACTOR of a saturated network.'),
)
@output_option_group()
@reports_errors
def efficacy_command(scenario_path: Path, shrink: float | None, fmt: str, out: Path | None) -> None:
    """Efficacy ψ = α·N_E²/N_Ω of the scenario's primary overlay."""
    scenario = parse_scenario(scenario_path)
    alpha, n_omega = scenario.demand.rate, scenario.system.size
    inputs: dict[str, Any] = {'scenario': scenario.name, 'alpha': alpha, 'n_omega': n_omega}
    outputs: dict[str, Any] = {}
    if scenario.overlays or scenario.multipurpose is None:
        overlay = scenario.primary_overlay('efficacy')
        report = analytic.efficacy(alpha, overlay.effective_size, n_omega)
        inputs.update(overlay=scenario.primary_name, n_e=report.n_e)
        outputs.update(efficacy=report.analytic, per_node=report.per_node, coverage=report.n_e / n_omega)
    if shrink is not None:
        disconnect = analytic.disconnect_experiment(alpha, n_omega, shrink)
        inputs['shrink'] = shrink
        outputs.update(
            disconnect_n_e=disconnect.n_e,
            disconnect_efficacy=disconnect.analytic,
            disconnect_intermediate=disconnect.intermediate,
        )
    if scenario.multipurpose is not None:
        inputs['multipurpose'] = [list(spec) for spec in scenario.multipurpose]
        outputs['multipurpose_total'] = analytic.multipurpose_total(scenario.multipurpose)
    _write(Report('efficacy', inputs, outputs), fmt, out)


@main.command('hetnet')
@cloup.option_group(
    'Scenario',
    scenario_option(),
    cloup.option('--offload', type=types.Fraction,
                 help='Also report the capacity of two interdependent networks when this fraction '
                      'of the traffic is offloaded to the faster one.'),
    cloup.option('--simulate', is_flag=True, help='Estimate the joint capacity by simulation too.'),
)
@simulation_option_group()
@output_option_group()
@reports_errors
def hetnet_command(
    scenario_path: Path, offload: float | None, simulate: bool,
    seed: int | None, attempts: int | None, trials: int | None, workers: int | None,
    fmt: str, out: Path | None,
) -> None:
    """Joint capacity of a default network and a preferred network covering part of the nodes."""
    scenario = parse_scenario(scenario_path)
    config: HetNetConfig = scenario.require('hetnet', 'hetnet')
    result = analytic.hetnet_capacity(config)
    inputs: dict[str, Any] = {
        'scenario': scenario.name,
        'default_capacity': config.default_capacity,
        'preferred_capacity': config.preferred_capacity,
        'coverage': config.coverage,
    }
    outputs: dict[str, Any] = {
        'total': result.total,
        'normalized_total': result.normalized_total,
        'preferred_load': result.preferred_load,
        'default_load': result.default_load,
        'preferred_share': result.preferred_share,
        'binding': result.binding,
    }
    diagnostics: dict[str, Any] = {}
    if offload is not None:
        inputs['offload'] = offload
        outputs['dependent_capacity'] = analytic.dependent_capacity(config.default_capacity, offload)
    if simulate:
        cfg = _sim_config(scenario, seed, attempts, trials, workers)
        name = scenario.hetnet_overlay or scenario.primary_name
        if name is None:
            raise MissingSectionError('overlays', 'hetnet --simulate')
        overlay = scenario.overlays[name]
        estimate = montecarlo.simulate_hetnet(scenario.system, overlay, scenario.demand, config, cfg)
        inputs.update(_sim_inputs(cfg), overlay=name)
        diagnostics.update(
            simulated_total=estimate.total,
            simulated_preferred_share=estimate.preferred_share,
            share_stderr=estimate.share_stderr,
            simulated_binding=estimate.binding,
            relative_gap=_relative_gap(estimate.total, result.total),
        )
    _write(Report('hetnet', inputs, outputs, diagnostics), fmt, out)


@main.command('plan-coverage')
@cloup.option_group(
    'Scenario',
    scenario_option(required=False),
    cloup.option('--target', type=types.Flow, required=True, help='Joint capacity to reach.'),
    cloup.option('--default-capacity', type=types.Flow,
                 help="Capacity of the default network.  [default: scenario's hetnet or 1]"),
)
@output_option_group()
@reports_errors
def plan_coverage_command(
    scenario_path: Path | None, target: float, default_capacity: float | None, fmt: str, out: Path | None,
) -> None:
    """Coverage the preferred network needs for the joint capacity to reach --target."""
    scenario = _load(scenario_path)
    if default_capacity is None:
        hetnet = scenario.hetnet if scenario is not None else None
        default_capacity = hetnet.default_capacity if hetnet is not None else 1.0
    coverage = analytic.plan_coverage(default_capacity, target)
    achieved = analytic.hetnet_capacity(HetNetConfig(default_capacity, math.inf, coverage))
    _write(Report(
        'plan-coverage',
        inputs={'default_capacity': default_capacity, 'target': target},
        outputs={'coverage': coverage, 'preferred_share': coverage ** 2},
        diagnostics={'achieved_total': achieved.total},
    ), fmt, out)


@main.command('grow')
@cloup.option_group(
    'Scenario',
    scenario_option(required=False),
    cloup.option('--rate', type=types.Flow, help="Attempt rate α.  [default: scenario's demand or 1]"),
)
@cloup.option_group(
    'Schedule',
    cloup.option('--n-omega', type=click.IntRange(min=1), help='Initial size of the information system.'),
    cloup.option('--start', type=click.IntRange(min=0), help='Initial size of the network.'),
    cloup.option('--stop', type=click.IntRange(min=0), help='Final size of the network (inclusive).'),
    cloup.option('--step', type=click.IntRange(min=1), default=1, show_default=True, help='Growth step.'),
    help="Overrides the scenario's trajectory. Past N_Ω, the system grows with the network.",
)
@cloup.constraint(all_or_none, ['n_omega', 'start', 'stop'])
@cloup.constraint(RequireAtLeast(1), ['scenario_path', 'n_omega'])
@output_option_group()
@reports_errors
def grow_command(
    scenario_path: Path | None, rate: float | None,
    n_omega: int | None, start: int | None, stop: int | None, step: int,
    fmt: str, out: Path | None,
) -> None:
    """Efficacy along a growth trajectory (CSV header: step,n_e,n_omega,efficacy)."""
    scenario = _load(scenario_path)
    if n_omega is not None:
        assert start is not None and stop is not None
        schedule = analytic.saturation_schedule(n_omega, start, stop, step)
    else:
        assert scenario is not None
        schedule = list(scenario.require('trajectory', 'grow'))
    alpha = rate if rate is not None else (scenario.demand.rate if scenario is not None else 1.0)
    points = analytic.growth_trajectory(alpha, schedule)
    saturated_at = next((p.step for p in points if p.saturated), None)
    _write(Report(
        'grow',
        inputs={'alpha': alpha, 'points': len(points)},
        outputs={'final_efficacy': points[-1].efficacy, 'saturated_at_step': saturated_at},
        series=Series.of(
            ('step', 'n_e', 'n_omega', 'efficacy'),
            [(p.step, p.n_e, p.n_omega, p.efficacy) for p in points],
        ),
    ), fmt, out)


@main.command('simulate')
@cloup.option_group(
    'Scenario',
    scenario_option(),
    cloup.option('--shrink', type=types.ShrinkFactor,
                 help='Disconnect all but 1/FACTOR of the network first.'),
    cloup.option('--against', metavar='OVERLAY',
                 help='Compare with another overlay with the same nodes and a different topology.'),
)
@cloup.constraint(mutually_exclusive, ['shrink', 'against'])
@simulation_option_group()
@output_option_group()
@reports_errors
def simulate_command(
    scenario_path: Path, shrink: float | None, against: str | None,
    seed: int | None, attempts: int | None, trials: int | None, workers: int | None,
    fmt: str, out: Path | None,
) -> None:
    """Monte Carlo estimate of the efficacy (CSV header: trial,success_rate,throughput)."""
    scenario = parse_scenario(scenario_path)
    overlay = scenario.primary_overlay('simulate')
    cfg = _sim_config(scenario, seed, attempts, trials, workers)
    alpha, n_omega = scenario.demand.rate, scenario.system.size
    inputs: dict[str, Any] = {
        'scenario': scenario.name, 'overlay': scenario.primary_name, 'alpha': alpha, 'n_omega': n_omega,
        **_sim_inputs(cfg),
    }
    diagnostics: dict[str, Any] = {}
    if against is not None:
        if against not in scenario.overlays:
            raise click.BadParameter(f'the scenario has no overlay named {against!r}', param_hint="'--against'")
        comparison = montecarlo.compare_topologies(
            scenario.system, overlay, scenario.overlays[against], scenario.demand, cfg,
        )
        inputs['against'] = against
        outputs: dict[str, Any] = {
            'throughput_hat': comparison.first.throughput_hat,
            'against_throughput_hat': comparison.second.throughput_hat,
            'max_gap': comparison.max_gap,
            'identical': comparison.first.per_trial == comparison.second.per_trial,
        }
        _write(Report('simulate', inputs, outputs, series=Series.of(
            ('trial', 'success_rate', 'throughput'), _trial_rows(comparison.first),
        )), fmt, out)
        return

    if shrink is not None:
        inputs['shrink'] = shrink
        result = montecarlo.simulate_disconnect(scenario.system, overlay, scenario.demand, shrink, cfg)
    else:
        result = montecarlo.simulate_contacts(scenario.system, overlay, scenario.demand, cfg)
    outputs = {
        'throughput_hat': result.throughput_hat,
        'stderr': result.stderr,
        'success_rate': result.success_rate,
        'satisfied_demand': result.satisfied_demand,
        'n_e': result.n_e,
    }
    if scenario.demand.target_rule is TargetRule.UNIFORM and not scenario.demand.contact_sets:
        expected = analytic.efficacy(alpha, result.n_e, n_omega).with_simulation(result.throughput_hat, result.stderr)
        diagnostics.update(analytic=expected.analytic, gap_in_stderr=expected.gap_in_stderr)
    _write(Report('simulate', inputs, outputs, diagnostics, Series.of(
        ('trial', 'success_rate', 'throughput'), _trial_rows(result),
    )), fmt, out)


@main.command('compare-models')
@cloup.option_group(
    'Scenario',
    scenario_option(required=False),
    cloup.option('--size', 'sizes', type=click.IntRange(min=1), multiple=True,
                 help="Network size (repeatable).  [default: the scenario's N_Ω]"),
    cloup.option('--split', type=click.IntRange(min=1), help='Also split every node in this many parts.'),
)
@cloup.constraint(RequireAtLeast(1), ['scenario_path', 'sizes'])
@output_option_group()
@reports_errors
def compare_models_command(
    scenario_path: Path | None, sizes: tuple[int, ...], split: int | None, fmt: str, out: Path | None,
) -> None:
    """Link-counting vs node-counting valuations."""
    scenario = _load(scenario_path)
    if not sizes:
        assert scenario is not None
        sizes = (scenario.system.size,)
    header = ['n', 'link_value', 'node_value', 'n_log_n', 'link_share']
    rows: list[list[Any]] = []
    for row in valuemodels.value_table(sizes):
        share = valuemodels.compare_value_models(row.n).link_share
        rows.append([row.n, row.link_value, row.node_value, row.n_log_n, share])
    if split is not None:
        header += ['link_ratio', 'per_resource_gain']
        for values in rows:
            n = values[0]
            if n >= 2:
                outcome = valuemodels.split_contradiction(n, split)
                values += [outcome.link_ratio, outcome.per_resource_gain]
            else:
                values += [None, None]
    outputs: dict[str, Any] = {'sizes': list(sizes)}
    largest = max(sizes)
    if largest >= 3:
        verdict = valuemodels.bridge_value_check(largest)
        outputs.update(bridge_link_value=verdict.link_value, bridge_check=verdict.passed)
    _write(Report(
        'compare-models',
        inputs={'sizes': list(sizes), 'split': split},
        outputs=outputs,
        series=Series.of(header, rows),
    ), fmt, out)


@main.command('verify')
@cloup.option_group(
    'Scenario',
    scenario_option(required=False),
    cloup.option('--tolerance', type=click.FloatRange(min=0, min_open=True), default=3.0, show_default=True,
                 help='Largest accepted gap between simulation and analytic result, in standard errors.'),
    cloup.option('--grid', type=click.IntRange(min=1), metavar='N',
                 help='Also compare pair enumeration with the closed form for every N_Ω <= N.'),
)
@cloup.constraint(RequireAtLeast(1), ['scenario_path', 'grid'])
@simulation_option_group()
@output_option_group()
@reports_errors
def verify_command(
    scenario_path: Path | None, tolerance: float, grid: int | None,
    seed: int | None, attempts: int | None, trials: int | None, workers: int | None,
    fmt: str, out: Path | None,
) -> None:
    """Run the closed form, the exact enumeration and the simulation side by side.
    Exits with status 4 if the simulation is more than --tolerance standard
    errors off the enumeration, or if the enumeration and the closed form differ
    by more than 1e-12 (relative, once ψ > 1)."""
    scenario = _load(scenario_path)
    inputs: dict[str, Any] = {'tolerance': tolerance}
    outputs: dict[str, Any] = {}
    diagnostics: dict[str, Any] = {}
    passed = True
    if scenario is not None:
        overlay = scenario.primary_overlay('verify')
        cfg = _sim_config(scenario, seed, attempts, trials, workers)
        alpha, n_omega = scenario.demand.rate, scenario.system.size
        inputs.update(scenario=scenario.name, overlay=scenario.primary_name, alpha=alpha,
                      n_e=overlay.effective_size, n_omega=n_omega, **_sim_inputs(cfg))
        enumerated = montecarlo.enumerate_contacts(scenario.system, overlay, scenario.demand)
        result = montecarlo.simulate_contacts(scenario.system, overlay, scenario.demand, cfg)
        check = EfficacyReport(enumerated, overlay.effective_size).with_simulation(
            result.throughput_hat, result.stderr,
        )
        gap = check.gap_in_stderr
        assert gap is not None
        passed = gap <= tolerance
        outputs.update(enumerated=enumerated, simulated=result.throughput_hat, stderr=result.stderr,
                       gap_in_stderr=gap)
        if scenario.demand.target_rule is TargetRule.UNIFORM and not scenario.demand.contact_sets:
            closed_form = analytic.efficacy(alpha, overlay.effective_size, n_omega).analytic
            enumeration_error = abs(enumerated - closed_form)
            outputs['analytic'] = closed_form
            diagnostics['enumeration_error'] = enumeration_error
            if enumeration_error > Tolerance.exact * max(1.0, closed_form):
                passed = False
    if grid is not None:
        alpha = scenario.demand.rate if scenario is not None else 1.0
        mismatches = montecarlo.oracle_grid(grid, alpha)
        inputs['grid'] = grid
        outputs['grid_mismatches'] = len(mismatches)
        if mismatches:
            diagnostics['first_mismatch'] = list(mismatches[0])
            passed = False
    outputs['verdict'] = 'PASS' if passed else 'FAIL'
    _write(Report('verify', inputs, outputs, diagnostics), fmt, out)
    if not passed:
        raise VerificationFailed('the simulation and the analytic results disagree')
