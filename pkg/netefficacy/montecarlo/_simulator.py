from __future__ import annotations

import dataclasses as dc
import logging
import math
import warnings
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np

from netefficacy import warnings as switches
from netefficacy._model import bind_overlay
from netefficacy._model import DemandModel
from netefficacy._model import ensure_valid
from netefficacy._model import HetNetConfig
from netefficacy._model import InformationSystem
from netefficacy._model import NetworkOverlay
from netefficacy._model import TargetRule
from netefficacy._util import require
from netefficacy._util import Tolerance
from netefficacy.analytic import _joint_capacity
from netefficacy.analytic import Binding
from netefficacy.analytic import HetNetResult
from netefficacy.invariants import at_least
from netefficacy.invariants import Field
from netefficacy.invariants import InRange
from netefficacy.invariants import Predicate
from netefficacy.invariants import unsigned_int
from netefficacy.invariants import validated_by
from netefficacy.typing import Flow
from netefficacy.typing import NodeId
from ._streams import MAX_SEED
from ._streams import sample_members
from ._streams import trial_stream

logger = logging.getLogger(__name__)

CHUNK_SIZE = 1 << 18
"""Attempts drawn per vectorized batch. Part of the stream layout: changing
it changes every simulated result."""


@validated_by(
    Field('seed', unsigned_int & InRange(0, MAX_SEED))
    & Field('attempts', at_least(1))
    & Field('trials', at_least(1))
    & Field('first_trial', unsigned_int)
    & Field('workers', at_least(1))
    & Predicate(lambda cfg, ctx: cfg.attempts >= cfg.trials, 'attempts >= trials',
                error='attempts must be >= trials (every trial needs at least one attempt)')
)
@dc.dataclass(frozen=True)
class SimConfig:
    """
    :param seed: 64-bit unsigned seed of every stream.
    :param attempts: total contact attempts, split evenly across trials
        (the first ``attempts % trials`` trials draw one more).
    :param trials: independent repetitions used to estimate the standard error.
    :param first_trial: index of the first trial; runs with disjoint trial
        indices can be merged with :meth:`SimResult.merge`.
    :param workers: number of threads running trials; never affects results.
    """

    seed: int = 0
    attempts: int = 100_000
    trials: int = 10
    first_trial: int = 0
    workers: int = 1

    def trial_indices(self) -> range:
        return range(self.first_trial, self.first_trial + self.trials)

    def attempts_of(self, local_index: int) -> int:
        base, extra = divmod(self.attempts, self.trials)
        return base + (1 if local_index < extra else 0)


@dc.dataclass(frozen=True)
class SimResult:
    """Outcome of a contact simulation.

    ``success_rate`` pools every attempt of every trial; ``stderr`` is the
    standard error of ``throughput_hat`` across trials (for a single trial,
    the binomial standard error of its attempts).
    """

    success_rate: float
    throughput_hat: Flow
    stderr: float
    per_trial: tuple[float, ...]
    trial_successes: tuple[int, ...]
    trial_attempts: tuple[int, ...]
    alpha: float
    n_e: int
    n_omega: int
    first_trial: int = 0

    @property
    def trials(self) -> int:
        return len(self.per_trial)

    @property
    def attempts(self) -> int:
        return sum(self.trial_attempts)

    @property
    def trial_throughputs(self) -> tuple[Flow, ...]:
        return tuple(self.alpha * self.n_e * rate for rate in self.per_trial)

    @property
    def satisfied_demand(self) -> float:
        """Fraction of the demand of the whole information system that is
        satisfied, disconnected nodes included: ψ̂/(α·N_Ω)."""
        return self.throughput_hat / (self.alpha * self.n_omega)

    def merge(self, other: SimResult) -> SimResult:
        """Combine with a run of the same scenario whose trials directly follow ours.

        Every trial keeps the attempts its own run gave it. The merged result
        is the one of a single run over all the trials only when that run
        splits its attempts the same way, e.g. when the attempts of every run
        are a multiple of its trials; otherwise the ``attempts % trials`` extra
        attempts land on different trials.
        """
        require(
            (self.alpha, self.n_e, self.n_omega) == (other.alpha, other.n_e, other.n_omega),
            'only results of the same scenario can be merged',
        )
        require(
            other.first_trial == self.first_trial + self.trials,
            f'trials of the second run must start at {self.first_trial + self.trials}; '
            f'they start at {other.first_trial}',
        )
        return summarize(
            self.trial_successes + other.trial_successes,
            self.trial_attempts + other.trial_attempts,
            alpha=self.alpha, n_e=self.n_e, n_omega=self.n_omega, first_trial=self.first_trial,
        )


def _rate_stderr(rates: np.ndarray, successes: int, attempts: int) -> float:
    if rates.size >= 2:
        return float(np.std(rates, ddof=1) / math.sqrt(rates.size))
    p = successes / attempts
    return math.sqrt(p * (1.0 - p) / attempts)


def summarize(
    successes: Sequence[int],
    attempts: Sequence[int],
    *,
    alpha: float,
    n_e: int,
    n_omega: int,
    first_trial: int = 0,
) -> SimResult:
    """Build a :class:`SimResult` out of per-trial success and attempt counts."""
    total_successes, total_attempts = sum(successes), sum(attempts)
    rates = np.array(successes, dtype=np.float64) / np.array(attempts, dtype=np.float64)
    success_rate = total_successes / total_attempts
    scale = alpha * n_e
    return SimResult(
        success_rate=success_rate,
        throughput_hat=scale * success_rate,
        stderr=scale * _rate_stderr(rates, total_successes, total_attempts),
        per_trial=tuple(float(r) for r in rates),
        trial_successes=tuple(successes),
        trial_attempts=tuple(attempts),
        alpha=alpha,
        n_e=n_e,
        n_omega=n_omega,
        first_trial=first_trial,
    )


@dc.dataclass(frozen=True)
class _TargetSampler:
    """Draws targets (as indices into the sorted Ω) for a batch of callers."""

    n_omega: int
    exclude_self: bool
    contact_flat: np.ndarray | None = None
    contact_offsets: np.ndarray | None = None
    contact_lengths: np.ndarray | None = None

    @classmethod
    def build(cls, omega: np.ndarray, demand: DemandModel) -> _TargetSampler:
        exclude_self = demand.target_rule is TargetRule.EXCLUDE_SELF
        if not demand.contact_sets:
            return cls(omega.size, exclude_self)
        lengths = np.zeros(omega.size, dtype=np.int64)
        offsets = np.zeros(omega.size, dtype=np.int64)
        chunks = []
        position = 0
        for node, contacts in sorted(demand.contact_sets.items()):
            i = int(np.searchsorted(omega, node))
            targets = np.searchsorted(omega, np.array(sorted(contacts), dtype=np.int64))
            offsets[i], lengths[i] = position, targets.size
            chunks.append(targets)
            position += targets.size
        return cls(omega.size, exclude_self, np.concatenate(chunks), offsets, lengths)

    def draw(self, rng: np.random.Generator, callers: np.ndarray) -> np.ndarray:
        m = callers.size
        if self.exclude_self:
            targets = rng.integers(0, self.n_omega - 1, size=m)
            targets += targets >= callers
        else:
            targets = rng.integers(0, self.n_omega, size=m)
        if self.contact_flat is not None:
            assert self.contact_offsets is not None and self.contact_lengths is not None
            u = rng.random(m)
            lengths = self.contact_lengths[callers]
            with_set = np.flatnonzero(lengths)
            picks = np.minimum((u[with_set] * lengths[with_set]).astype(np.int64), lengths[with_set] - 1)
            targets[with_set] = self.contact_flat[self.contact_offsets[callers[with_set]] + picks]
        return targets


@dc.dataclass(frozen=True)
class _ContactPlan:
    """Arrays shared read-only by every trial of a simulation."""

    caller_pool: np.ndarray
    in_network: np.ndarray
    sampler: _TargetSampler
    both_ends: bool

    @classmethod
    def build(
        cls,
        system: InformationSystem,
        network: frozenset[NodeId],
        demand: DemandModel,
        callers_from_network: bool,
    ) -> _ContactPlan:
        omega = np.array(sorted(system.nodes), dtype=np.int64)
        in_network = np.zeros(omega.size, dtype=bool)
        in_network[np.searchsorted(omega, np.array(sorted(network), dtype=np.int64))] = True
        caller_pool = np.flatnonzero(in_network) if callers_from_network else np.arange(omega.size)
        return cls(caller_pool, in_network, _TargetSampler.build(omega, demand), not callers_from_network)

    def count_hits(self, seed: int, trial: int, attempts: int) -> int:
        """Attempts of one trial whose target is in the network (and, for
        ``both_ends``, whose caller is too)."""
        rng = trial_stream(seed, trial)
        hits = 0
        remaining = attempts
        while remaining > 0:
            m = min(CHUNK_SIZE, remaining)
            callers = self.caller_pool[rng.integers(0, self.caller_pool.size, size=m)]
            targets = self.sampler.draw(rng, callers)
            hit = self.in_network[targets]
            if self.both_ends:
                hit &= self.in_network[callers]
            hits += int(np.count_nonzero(hit))
            remaining -= m
        return hits


def _run_trials(plan: _ContactPlan, cfg: SimConfig) -> list[int]:
    jobs = [(trial, cfg.attempts_of(i)) for i, trial in enumerate(cfg.trial_indices())]
    if cfg.workers == 1:
        return [plan.count_hits(cfg.seed, trial, attempts) for trial, attempts in jobs]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        # map() yields in submission order: results are merged by trial index
        return list(pool.map(lambda job: plan.count_hits(cfg.seed, *job), jobs))


_EFFICACY_DEVIATION = 'α·N_E·(N_E−1)/(N_Ω−1), not α·N_E²/N_Ω'
_SHARE_DEVIATION = 'a preferred share of N_E·(N_E−1)/(N_Ω·(N_Ω−1)), not n²'


def _check_inputs(
    system: InformationSystem,
    overlay: NetworkOverlay,
    demand: DemandModel,
    cfg: SimConfig,
    deviation: str = _EFFICACY_DEVIATION,
) -> None:
    require(overlay.is_bound_to(system), 'the overlay is not bound to this information system (use bind_overlay)')
    ensure_valid(demand, system=system)
    ensure_valid(cfg)
    if demand.target_rule is TargetRule.EXCLUDE_SELF:
        require(system.size >= 2, 'the exclude-self target rule needs at least 2 nodes in Ω')
        if switches.exclude_self_deviation:
            warnings.warn(f'the exclude-self target rule converges to {deviation}', stacklevel=3)


def simulate_contacts(
    system: InformationSystem,
    overlay: NetworkOverlay,
    demand: DemandModel,
    cfg: SimConfig,
) -> SimResult:
    """
    Estimate the efficacy of ``overlay`` by drawing contact attempts.

    Each attempt draws a caller uniformly from the effective network E and a
    target by ``demand.target_rule`` (or from the caller's contact set); it
    succeeds iff the target is in E. The expected success rate under the
    default rule is N_E/N_Ω, so ``throughput_hat`` estimates α·N_E²/N_Ω.
    Trial ``t`` only depends on ``(cfg.seed, t)``.
    """
    _check_inputs(system, overlay, demand, cfg)
    n_e = overlay.effective_size
    attempts = [cfg.attempts_of(i) for i in range(cfg.trials)]
    if n_e == 0:
        logger.info('empty effective network: nothing to simulate')
        successes = [0] * cfg.trials
    else:
        plan = _ContactPlan.build(system, overlay.effective, demand, callers_from_network=True)
        successes = _run_trials(plan, cfg)
    result = summarize(
        successes, attempts, alpha=demand.rate, n_e=n_e, n_omega=system.size, first_trial=cfg.first_trial
    )
    logger.info(
        'simulated %d attempts in %d trials (N_E=%d, N_Ω=%d): ψ̂=%.6g ± %.3g',
        cfg.attempts, cfg.trials, n_e, system.size, result.throughput_hat, result.stderr,
    )
    return result


def simulate_disconnect(
    system: InformationSystem,
    overlay: NetworkOverlay,
    demand: DemandModel,
    shrink_x: float,
    cfg: SimConfig,
) -> SimResult:
    """Disconnect all but ``floor(N_E / shrink_x)`` members, chosen by seeded
    uniform sampling, and simulate the contacts of the remaining network.
    The disconnected nodes keep their demand: targets are still drawn from
    the whole of Ω."""
    require(shrink_x >= 1, f'shrink_x must be >= 1; it is {shrink_x!r}')
    if shrink_x == 1:
        return simulate_contacts(system, overlay, demand, cfg)
    require(overlay.is_bound_to(system), 'the overlay is not bound to this information system (use bind_overlay)')
    keep = math.floor(overlay.effective_size / shrink_x)
    retained = sample_members(overlay.effective, keep, cfg.seed)
    logger.debug('disconnect experiment: keeping %d of %d nodes', keep, overlay.effective_size)
    return simulate_contacts(system, bind_overlay(system, retained), demand, cfg)


class TopologyComparison(NamedTuple):
    first: SimResult
    second: SimResult
    max_gap: float


def compare_topologies(
    system: InformationSystem,
    overlay_a: NetworkOverlay,
    overlay_b: NetworkOverlay,
    demand: DemandModel,
    cfg: SimConfig,
) -> TopologyComparison:
    """Simulate two overlays sharing the same effective set but differing in
    topology, with the same seed. In an unconstrained network reachability
    doesn't depend on links, so the two results are identical."""
    require(
        overlay_a.effective == overlay_b.effective,
        'overlays must have the same effective set to compare their topologies',
    )
    logger.info(
        'comparing %s (%d links) with %s (%d links)',
        overlay_a.topology.describe(), overlay_a.topology.link_count(overlay_a.effective_size),
        overlay_b.topology.describe(), overlay_b.topology.link_count(overlay_b.effective_size),
    )
    first = simulate_contacts(system, overlay_a, demand, cfg)
    second = simulate_contacts(system, overlay_b, demand, cfg)
    gaps = [abs(a - b) for a, b in zip(first.trial_throughputs, second.trial_throughputs)]
    max_gap = max([abs(first.throughput_hat - second.throughput_hat), *gaps])
    return TopologyComparison(first, second, max_gap)


@dc.dataclass(frozen=True)
class HetNetEstimate:
    """Simulated counterpart of :class:`~netefficacy.analytic.HetNetResult`."""

    total: Flow
    preferred_load: Flow
    default_load: Flow
    binding: Binding
    preferred_share: float
    share_stderr: float
    per_trial: tuple[float, ...]
    default_capacity: Flow

    def as_result(self) -> HetNetResult:
        return HetNetResult(
            total=self.total,
            preferred_load=self.preferred_load,
            default_load=self.default_load,
            binding=self.binding,
            default_capacity=self.default_capacity,
            preferred_share=self.preferred_share,
        )


def simulate_hetnet(
    system: InformationSystem,
    preferred_overlay: NetworkOverlay,
    demand: DemandModel,
    capacities: HetNetConfig,
    cfg: SimConfig,
) -> HetNetEstimate:
    """
    Tag every attempt between two nodes of the preferred network "preferred"
    and every other attempt "default", then scale the attempt mass until the
    first network saturates. Callers are drawn from all of Ω (the default
    network connects everybody); the preferred share converges to n².
    """
    _check_inputs(system, preferred_overlay, demand, cfg, deviation=_SHARE_DEVIATION)
    ensure_valid(capacities)
    coverage = preferred_overlay.effective_size / system.size
    require(
        abs(capacities.coverage - coverage) <= Tolerance.composed,
        f'coverage {capacities.coverage!r} does not match the preferred overlay '
        f'({preferred_overlay.effective_size}/{system.size} = {coverage!r})',
    )
    attempts = [cfg.attempts_of(i) for i in range(cfg.trials)]
    if preferred_overlay.effective_size == 0:
        tagged = [0] * cfg.trials
    else:
        plan = _ContactPlan.build(system, preferred_overlay.effective, demand, callers_from_network=False)
        tagged = _run_trials(plan, cfg)
    shares = np.array(tagged, dtype=np.float64) / np.array(attempts, dtype=np.float64)
    share = sum(tagged) / sum(attempts)
    total, binding = _joint_capacity(capacities.default_capacity, capacities.preferred_capacity, share)
    logger.info('preferred share %.6g (n² = %.6g): joint capacity %.6g', share, capacities.coverage ** 2, total)
    return HetNetEstimate(
        total=total,
        preferred_load=share * total,
        default_load=(1.0 - share) * total,
        binding=binding,
        preferred_share=share,
        share_stderr=_rate_stderr(shares, sum(tagged), sum(attempts)),
        per_trial=tuple(float(s) for s in shares),
        default_capacity=capacities.default_capacity,
    )
