"""
Seeded Monte Carlo simulation of contact attempts, used as an independent
check of the closed-form results in :mod:`netefficacy.analytic`.
"""
from ._oracle import enumerate_contacts
from ._oracle import enumerate_efficacy
from ._oracle import GridAgreement
from ._oracle import GridDeviation
from ._oracle import GridMismatch
from ._oracle import loglog_slope
from ._oracle import oracle_grid
from ._oracle import quadratic_law_sweep
from ._oracle import QuadraticLawFit
from ._oracle import sampled_grid
from ._oracle import simulation_grid_agreement
from ._oracle import SweepPoint
from ._simulator import CHUNK_SIZE
from ._simulator import compare_topologies
from ._simulator import HetNetEstimate
from ._simulator import SimConfig
from ._simulator import simulate_contacts
from ._simulator import simulate_disconnect
from ._simulator import simulate_hetnet
from ._simulator import SimResult
from ._simulator import summarize
from ._simulator import TopologyComparison
from ._streams import MAX_SEED
from ._streams import Purpose
from ._streams import purpose_stream
from ._streams import sample_contact_sets
from ._streams import sample_members
from ._streams import trial_stream

__all__ = [
    'CHUNK_SIZE',
    'GridAgreement',
    'GridDeviation',
    'GridMismatch',
    'HetNetEstimate',
    'MAX_SEED',
    'Purpose',
    'QuadraticLawFit',
    'SimConfig',
    'SimResult',
    'SweepPoint',
    'TopologyComparison',
    'compare_topologies',
    'enumerate_contacts',
    'enumerate_efficacy',
    'loglog_slope',
    'oracle_grid',
    'purpose_stream',
    'quadratic_law_sweep',
    'sample_contact_sets',
    'sample_members',
    'sampled_grid',
    'simulate_contacts',
    'simulate_disconnect',
    'simulate_hetnet',
    'simulation_grid_agreement',
    'summarize',
    'trial_stream',
]
