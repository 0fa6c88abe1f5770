"""
Closed-form network efficacy.

Every function here is pure and exact up to double precision: efficacy of a
network inside a larger information system (ψ = α·N_E²/N_Ω), the disconnect
experiment, joint capacity of a default + preferred network, coverage
planning, growth trajectories and multipurpose totals.

Capacities are returned in absolute flow units (whatever unit ``C_D`` and
``C_K`` are expressed in). The unit-normalized form, where ``C_D = 1``, is
available as :attr:`HetNetResult.normalized_total`.
"""
from __future__ import annotations

import dataclasses as dc
import enum
import math
import warnings
from collections.abc import Iterable

from netefficacy import warnings as switches
from netefficacy._model import EfficacyReport
from netefficacy._model import ensure_valid
from netefficacy._model import EventDistribution
from netefficacy._model import HetNetConfig
from netefficacy._util import check_count
from netefficacy._util import check_rate
from netefficacy._util import close_to
from netefficacy._util import require
from netefficacy._util import Tolerance
from netefficacy.exceptions import PreconditionError
from netefficacy.typing import Flow
from netefficacy.typing import Schedule
from netefficacy.typing import SchedulePoint


def expected_utility(psi_value: float, dist: EventDistribution) -> float:
    """U = ψ(k)·Σ ξ(e_i)·P(e_i).

    :raises ValidationError: if ``dist`` is not a valid distribution.
    """
    ensure_valid(dist)
    require(math.isfinite(psi_value), f'psi_value must be finite; it is {psi_value!r}')
    return psi_value * dist.weighted_sum()


def _check_efficacy_args(alpha: float, n_e: int, n_omega: int) -> None:
    check_rate(alpha)
    check_count(n_omega, 'n_omega', minimum=1)
    check_count(n_e, 'n_e')
    require(n_e <= n_omega, f'n_e = {n_e} exceeds n_omega = {n_omega}: the effective network must be a subset of Ω')


def _psi(alpha: float, n_e: int, n_omega: int) -> Flow:
    # α·N_E·(N_E/N_Ω) is exactly α·N_Ω at saturation
    return alpha * n_e * (n_e / n_omega)


def efficacy(alpha: float, n_e: int, n_omega: int) -> EfficacyReport:
    """Network efficacy ψ = α·N_E²/N_Ω of an effective network of ``n_e``
    nodes inside an information system of ``n_omega`` nodes.

    :raises PreconditionError: if ``n_e > n_omega``, ``n_omega < 1`` or ``alpha <= 0``.
    """
    _check_efficacy_args(alpha, n_e, n_omega)
    return EfficacyReport(analytic=_psi(alpha, n_e, n_omega), n_e=n_e)


@dc.dataclass(frozen=True)
class DisconnectReport(EfficacyReport):
    """Efficacy after a network disconnects all but ``1/shrink_x`` of its nodes.
    ``intermediate`` is the form α·N_E/x obtained before substituting x = N_Ω/N_E."""

    shrink_x: float = 1.0
    intermediate: Flow = 0.0

    @property
    def forms_agree(self) -> bool:
        return close_to(self.analytic, self.intermediate, Tolerance.exact * max(1.0, self.analytic))


def disconnect_experiment(alpha: float, n_omega: int, shrink_x: float) -> DisconnectReport:
    """Efficacy when a saturated network of ``n_omega`` nodes keeps only
    ``floor(n_omega / shrink_x)`` of them connected.

    :raises PreconditionError: if ``shrink_x < 1``.
    """
    require(shrink_x >= 1, f'shrink_x must be >= 1; it is {shrink_x!r}')
    check_count(n_omega, 'n_omega', minimum=1)
    n_e = math.floor(n_omega / shrink_x)
    report = efficacy(alpha, n_e, n_omega)
    return DisconnectReport(
        analytic=report.analytic,
        n_e=n_e,
        shrink_x=shrink_x,
        intermediate=alpha * n_e / shrink_x,
    )


class Binding(str, enum.Enum):
    """Which capacity limits the joint capacity of a heterogeneous network."""

    DEFAULT = 'default'
    PREFERRED = 'preferred'


@dc.dataclass(frozen=True)
class HetNetResult:
    """``preferred_share`` is the fraction of the traffic riding the preferred
    network (n² analytically). It is kept even when ``total`` is 0."""

    total: Flow
    preferred_load: Flow
    default_load: Flow
    binding: Binding
    default_capacity: Flow
    preferred_share: float

    @property
    def normalized_total(self) -> float:
        """``total`` in units of the default network's capacity."""
        return self.total / self.default_capacity


def _joint_capacity(c_default: Flow, c_preferred: Flow, preferred_share: float) -> tuple[Flow, Binding]:
    default_bound = c_default / (1.0 - preferred_share) if preferred_share < 1 else math.inf
    if preferred_share == 0:
        return default_bound, Binding.DEFAULT
    preferred_bound = c_preferred / preferred_share
    if preferred_bound < default_bound:
        return preferred_bound, Binding.PREFERRED
    return default_bound, Binding.DEFAULT


def hetnet_capacity(cfg: HetNetConfig) -> HetNetResult:
    """
    Joint capacity ψ_K + ψ_D of a default network connecting every node and a
    preferred network connecting a fraction n of them.

    A fraction n² of the traffic has both ends on the preferred network and
    rides it; the remaining 1 − n² falls back to the default network. The joint
    capacity is ``min(C_D/(1−n²), C_K/n²)``; the first term is the classic
    ``1/(1−n²)`` in units of C_D, the second only matters when the preferred
    network is too small to carry its share.
    """
    ensure_valid(cfg)
    share = cfg.coverage ** 2
    total, binding = _joint_capacity(cfg.default_capacity, cfg.preferred_capacity, share)
    if binding is Binding.PREFERRED and switches.preferred_capacity_binding:
        warnings.warn(
            f'the preferred network capacity ({cfg.preferred_capacity:g}) limits the joint capacity '
            f'to {total:g}, below C_D/(1-n²) = {cfg.default_capacity / (1.0 - share):g}',
            stacklevel=2,
        )
    return HetNetResult(
        total=total,
        preferred_load=share * total,
        default_load=(1.0 - share) * total,
        binding=binding,
        default_capacity=cfg.default_capacity,
        preferred_share=share,
    )


def dependent_capacity(c_small: Flow, traffic_fraction_n: float) -> Flow:
    """Total traffic of two interdependent networks when a fraction n of the
    traffic is offloaded to the faster one: ``c_small / (1 − n)``."""
    require(c_small >= 0 and math.isfinite(c_small), f'c_small must be a finite capacity >= 0; it is {c_small!r}')
    require(0 <= traffic_fraction_n < 1, f'traffic fraction must satisfy 0 <= n < 1; it is {traffic_fraction_n!r}')
    return c_small / (1.0 - traffic_fraction_n)


def plan_coverage(c_default: Flow, target_total: Flow) -> float:
    """Coverage fraction n the preferred network needs for the joint capacity
    to reach ``target_total``, assuming its own capacity doesn't bind:
    ``n = sqrt(1 − c_default/target_total)``.

    :raises PreconditionError: if ``target_total < c_default`` (already
        achievable with n = 0).
    """
    require(c_default > 0 and math.isfinite(c_default), f'c_default must be a finite capacity > 0; it is {c_default!r}')
    require(math.isfinite(target_total), f'target_total must be finite; it is {target_total!r}')
    require(
        target_total >= c_default,
        f'target_total = {target_total:g} is below the default capacity {c_default:g}; '
        f'it is already achievable with n = 0',
    )
    return math.sqrt(1.0 - c_default / target_total)


@dc.dataclass(frozen=True)
class TrajectoryPoint:
    step: int
    n_e: int
    n_omega: int
    efficacy: Flow

    @property
    def saturated(self) -> bool:
        return self.n_e == self.n_omega


def growth_trajectory(alpha: float, schedule: Schedule) -> list[TrajectoryPoint]:
    """Efficacy at every ``(n_e, n_omega)`` point of ``schedule``.

    Once the network covers its information system (``n_e == n_omega``) and
    both grow together, efficacy grows linearly by α per added node.

    :raises PreconditionError: naming the step, if a point has ``n_e > n_omega``.
    """
    require(len(schedule) > 0, 'the growth schedule must not be empty')
    check_rate(alpha)
    points = []
    for step, (n_e, n_omega) in enumerate(schedule):
        try:
            _check_efficacy_args(alpha, n_e, n_omega)
        except PreconditionError as exc:
            raise PreconditionError(f'schedule step {step}: {exc}') from exc
        points.append(TrajectoryPoint(step, n_e, n_omega, _psi(alpha, n_e, n_omega)))
    return points


def saturation_schedule(n_omega: int, start: int, stop: int, step: int) -> list[SchedulePoint]:
    """Schedule of a network growing from ``start`` to ``stop`` nodes (inclusive)
    inside a system of ``n_omega`` nodes; past ``n_omega`` the system grows
    along with the network."""
    check_count(n_omega, 'n_omega', minimum=1)
    check_count(start, 'start')
    check_count(step, 'step', minimum=1)
    require(stop >= start, f'stop ({stop}) must be >= start ({start})')
    return [(n_e, max(n_omega, n_e)) for n_e in range(start, stop + 1, step)]


def multipurpose_total(systems: Iterable[tuple[float, int, int]]) -> Flow:
    """Total efficacy of a network serving several information systems,
    each given as ``(alpha, n_e, n_omega)``: the sum of their efficacies.

    :raises PreconditionError: naming the index of the first invalid triple.
    """
    total: list[float] = []
    for i, (alpha, n_e, n_omega) in enumerate(systems):
        try:
            total.append(efficacy(alpha, n_e, n_omega).analytic)
        except PreconditionError as exc:
            raise PreconditionError(f'system {i}: {exc}') from exc
    return math.fsum(total)
