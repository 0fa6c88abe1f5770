"""Top-level package for netefficacy."""
# WARNING: _version.py is generated by setuptools-scm upon package building/installation
from __future__ import annotations

try:
    from ._version import version as __version__
except ImportError:  # running from a source tree that was never built
    __version__ = '0.0.0'

from . import warnings
from ._model import (
    bind_overlay,
    DemandModel,
    EfficacyReport,
    ensure_valid,
    Event,
    EventDistribution,
    HetNetConfig,
    InformationSystem,
    NetworkOverlay,
    TargetRule,
    Topology,
    TopologyKind,
    validate,
)
from .analytic import (
    Binding,
    dependent_capacity,
    disconnect_experiment,
    DisconnectReport,
    efficacy,
    expected_utility,
    growth_trajectory,
    hetnet_capacity,
    HetNetResult,
    multipurpose_total,
    plan_coverage,
    saturation_schedule,
    TrajectoryPoint,
)
from .exceptions import (
    MissingSectionError,
    NetEfficacyError,
    PreconditionError,
    ScenarioParseError,
    ValidationError,
    Violation,
)
from .montecarlo import (
    compare_topologies,
    SimConfig,
    simulate_contacts,
    simulate_disconnect,
    simulate_hetnet,
    SimResult,
)
from .report import emit, Report, Series
from .scenario import parse_scenario, Scenario, scenario_from_text
from .valuemodels import (
    bridge_value_check,
    compare_value_models,
    information_density,
    split_contradiction,
    ValueComparison,
)

__all__ = [
    'Binding',
    'DemandModel',
    'DisconnectReport',
    'EfficacyReport',
    'Event',
    'EventDistribution',
    'HetNetConfig',
    'HetNetResult',
    'InformationSystem',
    'MissingSectionError',
    'NetEfficacyError',
    'NetworkOverlay',
    'PreconditionError',
    'Report',
    'Scenario',
    'ScenarioParseError',
    'Series',
    'SimConfig',
    'SimResult',
    'TargetRule',
    'Topology',
    'TopologyKind',
    'TrajectoryPoint',
    'ValidationError',
    'ValueComparison',
    'Violation',
    'bind_overlay',
    'bridge_value_check',
    'compare_topologies',
    'compare_value_models',
    'dependent_capacity',
    'disconnect_experiment',
    'efficacy',
    'emit',
    'ensure_valid',
    'expected_utility',
    'growth_trajectory',
    'hetnet_capacity',
    'information_density',
    'multipurpose_total',
    'parse_scenario',
    'plan_coverage',
    'saturation_schedule',
    'scenario_from_text',
    'simulate_contacts',
    'simulate_disconnect',
    'simulate_hetnet',
    'split_contradiction',
    'validate',
    'warnings',
]
