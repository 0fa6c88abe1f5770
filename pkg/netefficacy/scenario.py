"""
Scenario files.

A scenario is a YAML document (see ``docs/pages/scenarios.rst`` for the
schema) describing an information system, the overlays bound to it and the
parameters of the commands. Loading happens in two passes:

1. the YAML node tree is read key by key: malformed documents, unknown or
   duplicate keys and values of the wrong type raise
   :exc:`~netefficacy.exceptions.ScenarioParseError` with line and column;
2. the resulting :class:`Scenario` is validated as a whole: out-of-range
   values raise :exc:`~netefficacy.exceptions.ValidationError` whose
   violations are located by field path (e.g. ``hetnet.coverage``).
"""
from __future__ import annotations

import dataclasses as dc
import logging
import math
from collections.abc import Mapping
from pathlib import Path
from typing import Any
from typing import NamedTuple
from typing import NoReturn

import yaml
from yaml.constructor import SafeConstructor
from yaml.nodes import MappingNode
from yaml.nodes import Node
from yaml.nodes import ScalarNode
from yaml.nodes import SequenceNode

from netefficacy._model import bind_overlay
from netefficacy._model import DemandModel
from netefficacy._model import ensure_valid
from netefficacy._model import HetNetConfig
from netefficacy._model import InformationSystem
from netefficacy._model import NetworkOverlay
from netefficacy._model import TargetRule
from netefficacy._model import Topology
from netefficacy.analytic import saturation_schedule
from netefficacy.exceptions import MissingSectionError
from netefficacy.exceptions import PreconditionError
from netefficacy.exceptions import ScenarioParseError
from netefficacy.exceptions import ValidationError
from netefficacy.exceptions import Violation
from netefficacy.invariants import All
from netefficacy.invariants import at_least
from netefficacy.invariants import EMPTY_CONTEXT
from netefficacy.invariants import Each
from netefficacy.invariants import Field
from netefficacy.invariants import finite
from netefficacy.invariants import Invariant
from netefficacy.invariants import positive
from netefficacy.invariants import Predicate
from netefficacy.invariants import rules_for
from netefficacy.invariants import unsigned_int
from netefficacy.invariants import ValidationContext
from netefficacy.invariants import validated_by
from netefficacy.invariants.common import join_path
from netefficacy.montecarlo import sample_contact_sets
from netefficacy.montecarlo import SimConfig
from netefficacy.typing import NodeId
from netefficacy.typing import SchedulePoint

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

BUNDLED_DIR = Path(__file__).parent / 'scenarios'
"""Directory of the example scenarios shipped with the package."""


class PurposeSpec(NamedTuple):
    """One of the information systems served by a multipurpose network."""

    rate: float
    n_e: int
    n_omega: int


def _point_in_range(point: Any, ctx: ValidationContext) -> bool:
    n_e, n_omega = point
    return unsigned_int.holds(n_e) and at_least(1).holds(n_omega) and n_e <= n_omega


_point_fits = Predicate(
    _point_in_range, 'n_e <= n_omega', error='n_e must be an unsigned integer <= n_omega (n_omega >= 1)'
)

_purpose_fits = (
    Field('rate', positive & finite)
    & Field('n_e', unsigned_int)
    & Field('n_omega', at_least(1))
    & Predicate(lambda p, ctx: not unsigned_int.holds(p.n_e) or p.n_e <= p.n_omega, 'n_e <= n_omega',
                error='n_e must not exceed n_omega')
)


class _Registered(Invariant):
    """Holds if the value satisfies the invariants registered for its type."""

    def description(self) -> str:
        return 'valid'

    def violations(self, value: Any, path: str = '', ctx: ValidationContext = EMPTY_CONTEXT) -> list[Violation]:
        invariant = rules_for(value)
        return invariant.violations(value, path, ctx) if invariant is not None else []


class _ScenarioRules(Invariant):
    """Validates every section against the scenario's own information system."""

    sections = All(
        Field('system', _Registered()),
        Field('demand', _Registered()),
        Field('hetnet', _Registered(), optional=True),
        Field('sim', _Registered(), optional=True),
        Field('trajectory', Each(_point_fits), optional=True),
        Field('multipurpose', Each(_purpose_fits), optional=True),
    )

    def description(self) -> str:
        return 'valid scenario'

    def violations(self, value: Any, path: str = '', ctx: ValidationContext = EMPTY_CONTEXT) -> list[Violation]:
        ctx = ValidationContext(system=value.system)
        found = self.sections.violations(value, path, ctx)
        overlays_path = join_path(path, 'overlays')
        for name, overlay in value.overlays.items():
            found.extend(_Registered().violations(overlay, join_path(overlays_path, name), ctx))
        if value.primary is not None and value.primary not in value.overlays:
            found.append(Violation(join_path(path, 'primary'), f'unknown overlay {value.primary!r}'))
        if value.hetnet_overlay is not None:
            overlay = value.overlays.get(value.hetnet_overlay)
            where = join_path(path, 'hetnet')
            if overlay is None:
                found.append(Violation(join_path(where, 'overlay'), f'unknown overlay {value.hetnet_overlay!r}'))
            elif value.hetnet is not None:
                coverage = overlay.effective_size / value.system.size
                if not math.isclose(coverage, value.hetnet.coverage, rel_tol=0, abs_tol=1e-9):
                    found.append(Violation(
                        join_path(where, 'coverage'),
                        f'{value.hetnet.coverage!r} does not match the coverage of overlay '
                        f'{value.hetnet_overlay!r} ({coverage!r})',
                    ))
        return found


@validated_by(_ScenarioRules())
@dc.dataclass(frozen=True)
class Scenario:
    name: str
    system: InformationSystem
    overlays: Mapping[str, NetworkOverlay] = dc.field(default_factory=dict, hash=False)
    demand: DemandModel = DemandModel()
    hetnet: HetNetConfig | None = None
    hetnet_overlay: str | None = None
    sim: SimConfig | None = None
    trajectory: tuple[SchedulePoint, ...] | None = None
    multipurpose: tuple[PurposeSpec, ...] | None = None
    primary: str | None = None
    source: str = dc.field(default='<scenario>', compare=False)

    def require(self, section: str, command: str | None = None) -> Any:
        """Return the section ``section``.

        :raises MissingSectionError: if the scenario doesn't define it.
        """
        value = getattr(self, section)
        if value is None or (section == 'overlays' and not value):
            raise MissingSectionError(section, command)
        return value

    @property
    def primary_name(self) -> str | None:
        if self.primary is not None:
            return self.primary
        return next(iter(self.overlays), None)

    def primary_overlay(self, command: str | None = None) -> NetworkOverlay:
        """The overlay used by ``efficacy``, ``simulate`` and ``verify``:
        ``primary`` if given, otherwise the first overlay of the file."""
        overlays = self.require('overlays', command)
        return overlays[self.primary_name]

    @property
    def sim_config(self) -> SimConfig:
        return self.sim if self.sim is not None else SimConfig()


class _Reader:
    """Reads values off a YAML node tree, failing with the node's location."""

    def __init__(self, source: str):
        self.source = source
        self._constructor = SafeConstructor()

    def fail(self, node: Node, message: str) -> NoReturn:
        mark = node.start_mark
        raise ScenarioParseError(message, line=mark.line + 1, column=mark.column + 1, source=self.source)

    def mapping(
        self, node: Node, what: str, allowed: frozenset[str], required: frozenset[str] = frozenset(),
    ) -> dict[str, Node]:
        if not isinstance(node, MappingNode):
            self.fail(node, f'`{what}` must be a mapping')
        entries: dict[str, Node] = {}
        for key_node, value_node in node.value:
            key = self.scalar(key_node, f'key of `{what}`')
            if not isinstance(key, str):
                self.fail(key_node, f'keys of `{what}` must be strings; found {key!r}')
            if key in entries:
                self.fail(key_node, f'duplicate key `{key}` in `{what}`')
            if key not in allowed:
                self.fail(key_node, f'unknown key `{key}` in `{what}`; expected one of: {", ".join(sorted(allowed))}')
            entries[key] = value_node
        missing = sorted(required.difference(entries))
        if missing:
            self.fail(node, f'`{what}` is missing the required key `{missing[0]}`')
        return entries

    def sequence(self, node: Node, what: str) -> list[Node]:
        if not isinstance(node, SequenceNode):
            self.fail(node, f'`{what}` must be a list')
        return list(node.value)

    def scalar(self, node: Node, what: str) -> Any:
        if not isinstance(node, ScalarNode):
            self.fail(node, f'`{what}` must be a scalar')
        return self._constructor.construct_object(node, deep=True)

    def integer(self, node: Node, what: str) -> int:
        value = self.scalar(node, what)
        if isinstance(value, bool) or not isinstance(value, int):
            self.fail(node, f'`{what}` must be an integer; found {value!r}')
        return value

    def node_id(self, node: Node, what: str) -> NodeId:
        value = self.integer(node, what)
        if value < 0:
            self.fail(node, f'`{what}` must be an unsigned integer; found {value!r}')
        return value

    def number(self, node: Node, what: str) -> float:
        value = self.scalar(node, what)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(node, f'`{what}` must be a number; found {value!r}')
        return float(value)

    def string(self, node: Node, what: str) -> str:
        value = self.scalar(node, what)
        if not isinstance(value, str):
            self.fail(node, f'`{what}` must be a string; found {value!r}')
        return value


_TOP_LEVEL = frozenset({
    'schema_version', 'name', 'system', 'overlays', 'demand', 'hetnet', 'sim', 'trajectory',
    'multipurpose', 'primary',
})


def _read_system(r: _Reader, node: Node) -> InformationSystem:
    entries = r.mapping(node, 'system', frozenset({'size', 'nodes', 'id'}))
    if ('size' in entries) == ('nodes' in entries):
        r.fail(node, '`system` needs exactly one of `size` and `nodes`')
    system_id = r.string(entries['id'], 'system.id') if 'id' in entries else 'omega'
    if 'size' in entries:
        size = r.integer(entries['size'], 'system.size')
        return InformationSystem(frozenset(range(1, size + 1)), id=system_id)
    items = r.sequence(entries['nodes'], 'system.nodes')
    return InformationSystem(frozenset(r.node_id(item, 'system.nodes[]') for item in items), id=system_id)


def _read_members(r: _Reader, node: Node, what: str) -> frozenset[NodeId]:
    if isinstance(node, MappingNode):
        entries = r.mapping(node, what, frozenset({'range'}), required=frozenset({'range'}))
        bounds = r.sequence(entries['range'], f'{what}.range')
        if len(bounds) != 2:
            r.fail(entries['range'], f'`{what}.range` must be a [first, last] pair')
        lo, hi = (r.node_id(b, f'{what}.range[]') for b in bounds)
        return frozenset(range(lo, hi + 1))
    return frozenset(r.node_id(item, f'{what}[]') for item in r.sequence(node, what))


def _read_topology(r: _Reader, node: Node, what: str) -> Topology:
    if isinstance(node, ScalarNode):
        if r.scalar(node, what) != 'complete':
            r.fail(node, f'`{what}` must be `complete`, {{star: <id>}} or {{edges: [[a, b], ...]}}')
        return Topology.complete()
    entries = r.mapping(node, what, frozenset({'star', 'edges'}))
    if len(entries) != 1:
        r.fail(node, f'`{what}` needs exactly one of `star` and `edges`')
    if 'star' in entries:
        return Topology.star(r.node_id(entries['star'], f'{what}.star'))
    edges = []
    for edge in r.sequence(entries['edges'], f'{what}.edges'):
        ends = r.sequence(edge, f'{what}.edges[]')
        if len(ends) != 2:
            r.fail(edge, f'every edge of `{what}` must be an [a, b] pair')
        edges.append(tuple(r.node_id(end, f'{what}.edges[]') for end in ends))
    return Topology.edge_list(edges)  # type: ignore[arg-type]


def _read_overlays(r: _Reader, node: Node, system: InformationSystem) -> dict[str, NetworkOverlay]:
    if not isinstance(node, MappingNode):
        r.fail(node, '`overlays` must be a mapping from overlay names to overlays')
    overlays = {}
    names = set()
    for key_node, value_node in node.value:
        name = r.string(key_node, 'overlay name')
        if name in names:
            r.fail(key_node, f'duplicate overlay name `{name}`')
        names.add(name)
        what = f'overlays.{name}'
        entries = r.mapping(value_node, what, frozenset({'members', 'topology'}), required=frozenset({'members'}))
        overlay = bind_overlay(system, _read_members(r, entries['members'], f'{what}.members'))
        if 'topology' in entries:
            overlay = overlay.with_topology(_read_topology(r, entries['topology'], f'{what}.topology'))
        overlays[name] = overlay
    return overlays


def _read_demand(r: _Reader, node: Node, system: InformationSystem, default_seed: int) -> DemandModel:
    entries = r.mapping(node, 'demand', frozenset({'rate', 'target_rule', 'contact_sets'}))
    rate = r.number(entries['rate'], 'demand.rate') if 'rate' in entries else 1.0
    rule = TargetRule.UNIFORM
    if 'target_rule' in entries:
        value = r.string(entries['target_rule'], 'demand.target_rule')
        try:
            rule = TargetRule(value)
        except ValueError:
            choices = ', '.join(t.value for t in TargetRule)
            r.fail(entries['target_rule'], f'`demand.target_rule` must be one of: {choices}; found {value!r}')
    contact_sets = None
    if 'contact_sets' in entries:
        spec = r.mapping(entries['contact_sets'], 'demand.contact_sets', frozenset({'size', 'seed'}),
                         required=frozenset({'size'}))
        size = r.integer(spec['size'], 'demand.contact_sets.size')
        seed = r.node_id(spec['seed'], 'demand.contact_sets.seed') if 'seed' in spec else default_seed
        try:
            contact_sets = sample_contact_sets(system, size, seed)
        except PreconditionError as exc:
            raise ValidationError([Violation('demand.contact_sets.size', str(exc))], subject='Scenario') from exc
    return DemandModel(rate=rate, target_rule=rule, contact_sets=contact_sets)


def _read_hetnet(
    r: _Reader, node: Node, system: InformationSystem, overlays: Mapping[str, NetworkOverlay]
) -> tuple[HetNetConfig, str | None]:
    entries = r.mapping(
        node, 'hetnet', frozenset({'default_capacity', 'preferred_capacity', 'coverage', 'overlay'}),
        required=frozenset({'default_capacity', 'preferred_capacity'}),
    )
    default_capacity = r.number(entries['default_capacity'], 'hetnet.default_capacity')
    preferred_node = entries['preferred_capacity']
    if isinstance(preferred_node, ScalarNode) and r.scalar(preferred_node, 'hetnet.preferred_capacity') == 'unlimited':
        preferred_capacity = math.inf
    else:
        preferred_capacity = r.number(preferred_node, 'hetnet.preferred_capacity')
    overlay_name = r.string(entries['overlay'], 'hetnet.overlay') if 'overlay' in entries else None
    if 'coverage' in entries:
        coverage = r.number(entries['coverage'], 'hetnet.coverage')
    elif overlay_name is not None and overlay_name in overlays:
        coverage = overlays[overlay_name].effective_size / system.size
    else:
        r.fail(node, '`hetnet` needs `coverage` or the name of an existing `overlay`')
    return HetNetConfig(default_capacity, preferred_capacity, coverage), overlay_name


def _read_sim(r: _Reader, node: Node) -> SimConfig:
    entries = r.mapping(node, 'sim', frozenset({'seed', 'attempts', 'trials', 'workers'}))
    values = {key: r.integer(value, f'sim.{key}') for key, value in entries.items()}
    return SimConfig(**values)


def _read_trajectory(r: _Reader, node: Node) -> tuple[SchedulePoint, ...]:
    entries = r.mapping(node, 'trajectory', frozenset({'schedule', 'n_omega', 'start', 'stop', 'step'}))
    if 'schedule' in entries:
        if len(entries) > 1:
            r.fail(node, '`trajectory.schedule` excludes `n_omega`, `start`, `stop` and `step`')
        points = []
        for item in r.sequence(entries['schedule'], 'trajectory.schedule'):
            pair = r.sequence(item, 'trajectory.schedule[]')
            if len(pair) != 2:
                r.fail(item, 'every point of `trajectory.schedule` must be an [n_e, n_omega] pair')
            points.append((r.integer(pair[0], 'n_e'), r.integer(pair[1], 'n_omega')))
        return tuple(points)
    missing = sorted({'n_omega', 'start', 'stop'}.difference(entries))
    if missing:
        r.fail(node, f'`trajectory` needs `schedule`, or `n_omega`, `start` and `stop`; `{missing[0]}` is missing')
    args = {key: r.integer(value, f'trajectory.{key}') for key, value in entries.items()}
    args.setdefault('step', 1)
    try:
        return tuple(saturation_schedule(**args))
    except PreconditionError as exc:
        raise ValidationError([Violation('trajectory', str(exc))], subject='Scenario') from exc


def _read_multipurpose(r: _Reader, node: Node) -> tuple[PurposeSpec, ...]:
    specs = []
    for i, item in enumerate(r.sequence(node, 'multipurpose')):
        what = f'multipurpose[{i}]'
        entries = r.mapping(item, what, frozenset({'rate', 'n_e', 'n_omega'}),
                            required=frozenset({'n_e', 'n_omega'}))
        rate = r.number(entries['rate'], f'{what}.rate') if 'rate' in entries else 1.0
        specs.append(PurposeSpec(rate, r.integer(entries['n_e'], f'{what}.n_e'),
                                 r.integer(entries['n_omega'], f'{what}.n_omega')))
    return tuple(specs)


def scenario_from_text(text: str, source: str = '<scenario>') -> Scenario:
    """Parse and validate a scenario document.

    :raises ScenarioParseError: on malformed YAML, unknown keys or wrong types.
    :raises ValidationError: if some value is out of range.
    """
    r = _Reader(source)
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        line, column = (mark.line + 1, mark.column + 1) if mark is not None else (None, None)
        raise ScenarioParseError(exc.problem or str(exc), line, column, source) from exc
    if root is None:
        raise ScenarioParseError('the scenario is empty', line=1, column=1, source=source)
    entries = r.mapping(root, 'scenario', _TOP_LEVEL, required=frozenset({'system'}))

    if 'schema_version' in entries:
        version = r.integer(entries['schema_version'], 'schema_version')
        if version != SCHEMA_VERSION:
            r.fail(entries['schema_version'], f'unsupported schema_version {version}; expected {SCHEMA_VERSION}')
    name = r.string(entries['name'], 'name') if 'name' in entries else Path(source).stem
    system = _read_system(r, entries['system'])
    overlays = _read_overlays(r, entries['overlays'], system) if 'overlays' in entries else {}
    sim = _read_sim(r, entries['sim']) if 'sim' in entries else None
    default_seed = sim.seed if sim is not None else 0
    demand = _read_demand(r, entries['demand'], system, default_seed) if 'demand' in entries else DemandModel()
    hetnet, hetnet_overlay = (
        _read_hetnet(r, entries['hetnet'], system, overlays) if 'hetnet' in entries else (None, None)
    )
    scenario = Scenario(
        name=name,
        system=system,
        overlays=overlays,
        demand=demand,
        hetnet=hetnet,
        hetnet_overlay=hetnet_overlay,
        sim=sim,
        trajectory=_read_trajectory(r, entries['trajectory']) if 'trajectory' in entries else None,
        multipurpose=_read_multipurpose(r, entries['multipurpose']) if 'multipurpose' in entries else None,
        primary=r.string(entries['primary'], 'primary') if 'primary' in entries else None,
        source=source,
    )
    ensure_valid(scenario)
    logger.info(
        'loaded scenario %r from %s: N_Ω=%d, %d overlays', scenario.name, source, system.size, len(overlays),
    )
    return scenario


def parse_scenario(path: str | Path) -> Scenario:
    """Read, parse and validate the UTF-8 scenario file at ``path``."""
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except UnicodeDecodeError as exc:
        raise ScenarioParseError(f'the file is not valid UTF-8 ({exc.reason})', source=str(path)) from exc
    return scenario_from_text(text, source=str(path))


def bundled_scenarios() -> list[Path]:
    """Paths of the example scenarios shipped with the package."""
    return sorted(BUNDLED_DIR.glob('*.scenario'))
