"""
Domain types shared by all the other modules: the information system, the
network overlays bound to it, the demand model, the heterogeneous network
configuration and the efficacy report.

All types are frozen dataclasses. Constructing an object never validates it,
so that :func:`validate` can report *every* violated invariant as data;
operations call :func:`ensure_valid` on their inputs instead.
"""
from __future__ import annotations

import dataclasses as dc
import enum
import itertools
import math
from collections.abc import Iterable
from collections.abc import Mapping
from typing import Any
from typing import NamedTuple

import networkx as nx

from netefficacy._util import class_name
from netefficacy._util import Tolerance
from netefficacy.exceptions import ValidationError
from netefficacy.exceptions import Violation
from netefficacy.invariants import EMPTY_CONTEXT
from netefficacy.invariants import Each
from netefficacy.invariants import Field
from netefficacy.invariants import finite
from netefficacy.invariants import InRange
from netefficacy.invariants import Invariant
from netefficacy.invariants import non_negative
from netefficacy.invariants import not_empty
from netefficacy.invariants import positive
from netefficacy.invariants import Predicate
from netefficacy.invariants import rules_for
from netefficacy.invariants import SubsetOf
from netefficacy.invariants import SumsTo
from netefficacy.invariants import unsigned_int
from netefficacy.invariants import ValidationContext
from netefficacy.invariants import validated_by
from netefficacy.invariants.common import join_path
from netefficacy.invariants.common import preview
from netefficacy.typing import Flow
from netefficacy.typing import NodeId


def _all_unsigned(nodes: Iterable[Any], ctx: ValidationContext) -> bool:
    return all(unsigned_int.holds(node) for node in nodes)


def _system_nodes(value: Any, ctx: ValidationContext) -> frozenset[NodeId] | None:
    return ctx.system.nodes if ctx.system is not None else None


@validated_by(
    Field('nodes', not_empty.rephrased(error='size must be >= 1 (the system has no nodes)'))
    & Field('nodes', Predicate(_all_unsigned, 'node ids are unsigned integers',
                               error='node identifiers must be unsigned integers'))
)
@dc.dataclass(frozen=True)
class InformationSystem:
    """The universe Ω of complementary nodes whose communication demand exists
    independently of any network. Node ids have set semantics."""

    nodes: frozenset[NodeId]
    id: str = 'omega'

    @classmethod
    def of_size(cls, size: int, id: str = 'omega') -> InformationSystem:
        """A system with nodes ``1..size``."""
        return cls(frozenset(range(1, size + 1)), id=id)

    @property
    def size(self) -> int:
        """N_Ω."""
        return len(self.nodes)

    def __repr__(self) -> str:
        return f'{class_name(self)}(id={self.id!r}, size={self.size})'


class TopologyKind(str, enum.Enum):
    COMPLETE = 'complete'
    STAR = 'star'
    EDGES = 'edges'


@dc.dataclass(frozen=True)
class Topology:
    """Internal links of an overlay. Efficacy doesn't depend on it; it exists
    so that topology independence can be checked."""

    kind: TopologyKind = TopologyKind.COMPLETE
    center: NodeId | None = None
    edges: frozenset[tuple[NodeId, NodeId]] = frozenset()

    @classmethod
    def complete(cls) -> Topology:
        return cls(TopologyKind.COMPLETE)

    @classmethod
    def star(cls, center: NodeId) -> Topology:
        return cls(TopologyKind.STAR, center=center)

    @classmethod
    def edge_list(cls, edges: Iterable[tuple[NodeId, NodeId]]) -> Topology:
        # undirected: (a, b) and (b, a) are the same link
        normalized = frozenset((min(a, b), max(a, b)) for a, b in edges)
        return cls(TopologyKind.EDGES, edges=normalized)

    def link_count(self, n_e: int) -> int:
        if self.kind is TopologyKind.COMPLETE:
            return n_e * (n_e - 1) // 2
        if self.kind is TopologyKind.STAR:
            return max(n_e - 1, 0)
        return len(self.edges)

    def graph(self, nodes: Iterable[NodeId]) -> nx.Graph:
        """The topology over ``nodes`` as an undirected :class:`networkx.Graph`."""
        ordered = sorted(nodes)
        g = nx.Graph()
        g.add_nodes_from(ordered)
        if self.kind is TopologyKind.COMPLETE:
            g.add_edges_from(itertools.combinations(ordered, 2))
        elif self.kind is TopologyKind.STAR:
            g.add_edges_from((self.center, node) for node in ordered if node != self.center)
        else:
            g.add_edges_from(sorted(self.edges))
        return g

    def describe(self) -> str:
        if self.kind is TopologyKind.STAR:
            return f'star({self.center})'
        if self.kind is TopologyKind.EDGES:
            return f'edges({len(self.edges)})'
        return 'complete'


class _TopologyFitsOverlay(Invariant):
    def description(self) -> str:
        return 'topology is defined over the effective set'

    def violations(self, value: Any, path: str = '', ctx: ValidationContext = EMPTY_CONTEXT) -> list[Violation]:
        topology: Topology = value.topology
        where = join_path(path, 'topology')
        if topology.kind is TopologyKind.STAR and topology.center not in value.effective:
            message = f'star center {topology.center!r} is not in the effective set'
            return [Violation(join_path(where, 'center'), message)]
        if topology.kind is TopologyKind.EDGES:
            endpoints = set(itertools.chain.from_iterable(topology.edges))
            outside = endpoints.difference(value.effective)
            if outside:
                message = f'endpoints {preview(outside)} are not in the effective set'
                return [Violation(join_path(where, 'edges'), message)]
        return []


def _effective_is_intersection(overlay: Any, ctx: ValidationContext) -> bool:
    if ctx.system is None:
        return True
    return overlay.effective == overlay.members & ctx.system.nodes


@validated_by(
    Field('effective', SubsetOf(_system_nodes, 'Ω'))
    & Predicate(_effective_is_intersection, 'effective = members ∩ Ω',
                error='effective set is not the intersection of members and Ω')
    & _TopologyFitsOverlay()
)
@dc.dataclass(frozen=True)
class NetworkOverlay:
    """A network's node set B and, once bound to an information system, its
    effective set E = B ∩ Ω. Use :func:`bind_overlay` to create one."""

    members: frozenset[NodeId]
    effective: frozenset[NodeId] = frozenset()
    system: InformationSystem | None = dc.field(default=None, repr=False)
    topology: Topology = Topology()

    @property
    def effective_size(self) -> int:
        """N_E."""
        return len(self.effective)

    def is_bound_to(self, system: InformationSystem) -> bool:
        return self.system is not None and self.system == system

    def with_topology(self, topology: Topology) -> NetworkOverlay:
        return dc.replace(self, topology=topology)

    def graph(self) -> nx.Graph:
        """The overlay's topology over its effective set."""
        return self.topology.graph(self.effective)


def bind_overlay(system: InformationSystem, members: Iterable[NodeId]) -> NetworkOverlay:
    """
    Bind the network node set B (``members``) to ``system``, computing the
    effective network E = B ∩ Ω. ``members`` may contain ids outside Ω.
    The topology defaults to complete.
    """
    member_set = frozenset(members)
    return NetworkOverlay(
        members=member_set,
        effective=member_set & system.nodes,
        system=system,
        topology=Topology.complete(),
    )


class TargetRule(str, enum.Enum):
    UNIFORM = 'uniform'
    """Uniform over Ω, caller included (matches ψ = α·N_E²/N_Ω exactly)."""

    EXCLUDE_SELF = 'exclude-self'
    """Uniform over Ω without the caller: expectation α·N_E·(N_E−1)/(N_Ω−1)."""


class _ContactSetsWithinSystem(Invariant):
    def description(self) -> str:
        return 'contact sets are non-empty subsets of Ω'

    def violations(self, value: Any, path: str = '', ctx: ValidationContext = EMPTY_CONTEXT) -> list[Violation]:
        found = []
        nodes = ctx.system.nodes if ctx.system is not None else None
        for node in sorted(value):
            where = join_path(path, str(node))
            contacts = value[node]
            if not contacts:
                found.append(Violation(where, 'contact set must not be empty'))
            if nodes is not None:
                if node not in nodes:
                    found.append(Violation(where, f'node {node} is not in Ω'))
                outside = set(contacts).difference(nodes)
                if outside:
                    found.append(Violation(where, f'contacts {preview(outside)} are not in Ω'))
        return found


@validated_by(
    Field('rate', positive & finite)
    & Field('contact_sets', _ContactSetsWithinSystem(), optional=True)
)
@dc.dataclass(frozen=True)
class DemandModel:
    """Per-node attempt rate α and target selection. When a node has a
    contact set A, its targets are drawn uniformly from A instead of Ω."""

    rate: float = 1.0
    target_rule: TargetRule = TargetRule.UNIFORM
    contact_sets: Mapping[NodeId, frozenset[NodeId]] | None = dc.field(default=None, hash=False)


@validated_by(
    Field('default_capacity', positive & finite)
    & Field('preferred_capacity', non_negative)
    & Field('coverage', InRange(0.0, 1.0, hi_closed=False).rephrased(
        error='coverage {error}; it must satisfy 0 <= n < 1'))
)
@dc.dataclass(frozen=True)
class HetNetConfig:
    """A default network D connecting every node (capacity C_D) and a preferred
    network K connecting a fraction ``coverage`` of them (capacity C_K, may be
    ``math.inf``)."""

    default_capacity: Flow
    preferred_capacity: Flow
    coverage: float

    @property
    def preferred_is_unlimited(self) -> bool:
        return math.isinf(self.preferred_capacity)


@validated_by(
    Field('analytic', non_negative)
    & Field('n_e', unsigned_int)
    & Field('stderr', non_negative, optional=True)
)
@dc.dataclass(frozen=True)
class EfficacyReport:
    """Network efficacy ψ (flow units) of an effective network of ``n_e``
    nodes, optionally paired with a simulated estimate ψ̂ and its standard error."""

    analytic: Flow
    n_e: int
    simulated: Flow | None = None
    stderr: float | None = None

    @property
    def per_node(self) -> float | None:
        """Node communication efficacy ζ = ψ/N_E; ``None`` when N_E = 0."""
        return self.analytic / self.n_e if self.n_e > 0 else None

    @property
    def gap_in_stderr(self) -> float | None:
        """|ψ̂ − ψ| measured in standard errors; ``None`` without a simulation."""
        if self.simulated is None or self.stderr is None:
            return None
        gap = abs(self.simulated - self.analytic)
        if self.stderr == 0:
            return 0.0 if gap <= Tolerance.exact else math.inf
        return gap / self.stderr

    def with_simulation(self, simulated: Flow, stderr: float) -> EfficacyReport:
        return dc.replace(self, simulated=simulated, stderr=stderr)


class Event(NamedTuple):
    id: str
    probability: float
    weight: float


@validated_by(
    Field('events', not_empty & Each(
        Field('probability', non_negative) & Field('weight', finite)
    ))
    & Field('probabilities', SumsTo(1.0, Tolerance.composed))
)
@dc.dataclass(frozen=True)
class EventDistribution:
    """Events e_i with probability P(e_i) and event-dependent weight ξ(e_i)."""

    events: tuple[Event, ...]

    @classmethod
    def of(cls, *events: tuple[str, float, float]) -> EventDistribution:
        return cls(tuple(Event(*e) for e in events))

    @property
    def probabilities(self) -> list[float]:
        return [e.probability for e in self.events]

    def weighted_sum(self) -> float:
        """Σ ξ(e_i)·P(e_i)."""
        return math.fsum(e.weight * e.probability for e in self.events)


def validate(obj: object, *, system: InformationSystem | None = None, path: str = '') -> list[Violation]:
    """
    Return every invariant violated by ``obj`` (an empty list means ok). Never raises.

    :param obj: any core type, a ``SimConfig`` or a ``Scenario``.
    :param system: the information system to check subset invariants against
        (e.g. contact sets); bound overlays use their own system.
    :param path: prefix of the field paths in the returned violations.
    """
    invariant = rules_for(obj)
    if invariant is None:
        return [Violation(path, f'no invariants are defined for {class_name(obj)}')]
    if system is None:
        system = getattr(obj, 'system', None)
        if not isinstance(system, InformationSystem):
            system = None
    return invariant.violations(obj, path, ValidationContext(system=system))


def ensure_valid(obj: object, *, system: InformationSystem | None = None) -> None:
    """Like :func:`validate` but raises :exc:`ValidationError` on violations."""
    violations = validate(obj, system=system)
    if violations:
        raise ValidationError(violations, subject=class_name(obj))
