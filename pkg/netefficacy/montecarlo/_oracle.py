"""
Exact references for the simulator: enumeration of every (caller, target)
pair, the grid of points where simulation and enumeration are compared, and
the log-log regression behind the quadratic law.
"""
from __future__ import annotations

import dataclasses as dc
import logging
import math
from collections import defaultdict
from collections.abc import Iterable
from collections.abc import Sequence
from typing import NamedTuple

import numpy as np

from netefficacy._model import bind_overlay
from netefficacy._model import DemandModel
from netefficacy._model import EfficacyReport
from netefficacy._model import ensure_valid
from netefficacy._model import InformationSystem
from netefficacy._model import NetworkOverlay
from netefficacy._model import TargetRule
from netefficacy._util import check_count
from netefficacy._util import check_rate
from netefficacy._util import require
from netefficacy._util import Tolerance
from netefficacy.analytic import efficacy
from netefficacy.typing import Flow
from ._simulator import SimConfig
from ._simulator import simulate_contacts

logger = logging.getLogger(__name__)


def enumerate_contacts(system: InformationSystem, overlay: NetworkOverlay, demand: DemandModel) -> Flow:
    """
    Exact expected throughput of ``overlay``: every caller in E contacts
    every admissible target with weight α/|targets| and the pair counts iff
    the target is in E. Admissible targets are Ω, Ω without the caller, or
    the caller's contact set.
    """
    require(overlay.is_bound_to(system), 'the overlay is not bound to this information system (use bind_overlay)')
    ensure_valid(demand, system=system)
    if overlay.effective_size == 0:
        return 0.0
    omega = np.array(sorted(system.nodes), dtype=np.int64)
    in_e = np.isin(omega, np.array(sorted(overlay.effective), dtype=np.int64))
    exclude_self = demand.target_rule is TargetRule.EXCLUDE_SELF
    contact_sets = demand.contact_sets or {}

    # in-network pair counts grouped by the number of admissible targets
    hits_by_size: dict[int, int] = defaultdict(int)
    uniform_callers = [c for c in sorted(overlay.effective) if c not in contact_sets]
    if uniform_callers:
        pairs = np.broadcast_to(in_e, (len(uniform_callers), omega.size))
        hits = int(np.count_nonzero(pairs))
        if exclude_self:
            require(omega.size >= 2, 'the exclude-self target rule needs at least 2 nodes in Ω')
            hits -= len(uniform_callers)  # each caller is in E and is no longer its own target
            hits_by_size[omega.size - 1] += hits
        else:
            hits_by_size[omega.size] += hits
    for caller in sorted(overlay.effective & contact_sets.keys()):
        targets = contact_sets[caller]
        hits_by_size[len(targets)] += len(targets & overlay.effective)
    return math.fsum(demand.rate * hits / size for size, hits in hits_by_size.items())


def enumerate_efficacy(alpha: float, n_e: int, n_omega: int) -> Flow:
    """Pair enumeration for E = the first ``n_e`` nodes of Ω = {1..n_omega}
    under the uniform rule. Only the sizes matter, so no overlay is built."""
    in_e = np.zeros(n_omega, dtype=bool)
    in_e[:n_e] = True
    hits = int(np.count_nonzero(np.broadcast_to(in_e, (n_e, n_omega))))
    return alpha * hits / n_omega


class GridMismatch(NamedTuple):
    n_omega: int
    n_e: int
    enumerated: Flow
    analytic: Flow


def oracle_grid(max_n_omega: int, alpha: float = 1.0, tol: float = Tolerance.exact) -> list[GridMismatch]:
    """Compare pair enumeration with the closed form at every point
    ``1 <= n_omega <= max_n_omega``, ``0 <= n_e <= n_omega``. Returns the
    mismatches (an empty list means full agreement)."""
    check_count(max_n_omega, 'max_n_omega', minimum=1)
    check_rate(alpha)
    mismatches = []
    for n_omega in range(1, max_n_omega + 1):
        for n_e in range(n_omega + 1):
            enumerated = enumerate_efficacy(alpha, n_e, n_omega)
            analytic = efficacy(alpha, n_e, n_omega).analytic
            if abs(enumerated - analytic) > tol:
                mismatches.append(GridMismatch(n_omega, n_e, enumerated, analytic))
    logger.info(
        'oracle grid up to N_Ω=%d: %d points, %d mismatches',
        max_n_omega, (max_n_omega + 1) * (max_n_omega + 2) // 2 - 1, len(mismatches),
    )
    return mismatches


def sampled_grid(max_n_omega: int, n_omega_step: int = 5, n_e_points: int = 10) -> list[tuple[int, int]]:
    """``(n_e, n_omega)`` points with N_Ω every ``n_omega_step`` nodes up to
    ``max_n_omega`` and N_E at ``n_e_points + 1`` evenly spaced values of
    ``[0, N_Ω]`` (fewer when N_Ω is small)."""
    check_count(max_n_omega, 'max_n_omega', minimum=1)
    check_count(n_omega_step, 'n_omega_step', minimum=1)
    check_count(n_e_points, 'n_e_points', minimum=1)
    return [
        (n_e, n_omega)
        for n_omega in range(n_omega_step, max_n_omega + 1, n_omega_step)
        for n_e in sorted({round(k * n_omega / n_e_points) for k in range(n_e_points + 1)})
    ]


class GridDeviation(NamedTuple):
    n_omega: int
    n_e: int
    enumerated: Flow
    simulated: Flow
    gap_in_stderr: float


@dc.dataclass(frozen=True)
class GridAgreement:
    points: int
    max_gap: float
    deviations: tuple[GridDeviation, ...]

    @property
    def fraction(self) -> float:
        """Fraction of the points simulated within ``max_gap`` standard errors."""
        return 1.0 - len(self.deviations) / self.points


def simulation_grid_agreement(
    points: Iterable[tuple[int, int]],
    alpha: float = 1.0,
    cfg: SimConfig = SimConfig(),
    max_gap: float = 4.0,
) -> GridAgreement:
    """Simulate E = the first N_E nodes of Ω = {1..N_Ω} at every ``(n_e, n_omega)``
    of ``points`` and compare the estimate with the pair enumeration.
    Points farther than ``max_gap`` standard errors are reported as deviations."""
    check_rate(alpha)
    require(max_gap > 0, f'max_gap must be > 0; it is {max_gap!r}')
    demand = DemandModel(rate=alpha)
    deviations = []
    count = 0
    for n_e, n_omega in points:
        count += 1
        system = InformationSystem.of_size(n_omega)
        result = simulate_contacts(system, bind_overlay(system, range(1, n_e + 1)), demand, cfg)
        enumerated = enumerate_efficacy(alpha, n_e, n_omega)
        gap = EfficacyReport(enumerated, n_e).with_simulation(result.throughput_hat, result.stderr).gap_in_stderr
        assert gap is not None
        if gap > max_gap:
            deviations.append(GridDeviation(n_omega, n_e, enumerated, result.throughput_hat, gap))
    require(count > 0, 'the grid has no points')
    logger.info('simulation grid: %d points, %d beyond %g stderr', count, len(deviations), max_gap)
    return GridAgreement(count, max_gap, tuple(deviations))


def loglog_slope(n_e_values: Sequence[float], psi_values: Sequence[float]) -> float:
    """Least-squares slope of log ψ on log N_E."""
    require(len(n_e_values) == len(psi_values), 'n_e_values and psi_values must have the same length')
    require(len(n_e_values) >= 2, 'at least 2 points are needed to fit a slope')
    require(
        all(v > 0 for v in n_e_values) and all(v > 0 for v in psi_values),
        'log-log regression needs positive values',
    )
    slope, _ = np.polyfit(np.log(n_e_values), np.log(psi_values), 1)
    return float(slope)


class SweepPoint(NamedTuple):
    n_e: int
    throughput_hat: Flow
    stderr: float


@dc.dataclass(frozen=True)
class QuadraticLawFit:
    n_omega: int
    slope: float
    points: tuple[SweepPoint, ...]


def quadratic_law_sweep(
    n_omega: int = 1000,
    n_e_values: Iterable[int] = range(100, 1000, 100),
    alpha: float = 1.0,
    cfg: SimConfig = SimConfig(),
) -> QuadraticLawFit:
    """Simulate growing networks inside a fixed system and fit the log-log
    slope of ψ̂ against N_E; below saturation it should be close to 2."""
    system = InformationSystem.of_size(n_omega)
    demand = DemandModel(rate=alpha)
    points = []
    for n_e in n_e_values:
        result = simulate_contacts(system, bind_overlay(system, range(1, n_e + 1)), demand, cfg)
        points.append(SweepPoint(n_e, result.throughput_hat, result.stderr))
    slope = loglog_slope([p.n_e for p in points], [p.throughput_hat for p in points])
    logger.info('quadratic law sweep at N_Ω=%d: slope %.4f', n_omega, slope)
    return QuadraticLawFit(n_omega, slope, tuple(points))
