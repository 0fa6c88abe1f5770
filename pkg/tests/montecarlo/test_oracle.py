from __future__ import annotations

import pytest

from netefficacy import DemandModel
from netefficacy import efficacy
from netefficacy import TargetRule
from netefficacy.exceptions import PreconditionError
from netefficacy.montecarlo import enumerate_contacts
from netefficacy.montecarlo import enumerate_efficacy
from netefficacy.montecarlo import loglog_slope
from netefficacy.montecarlo import oracle_grid
from netefficacy.montecarlo import quadratic_law_sweep
from netefficacy.montecarlo import sampled_grid
from netefficacy.montecarlo import SimConfig
from netefficacy.montecarlo import simulate_contacts
from netefficacy.montecarlo import simulation_grid_agreement
from tests.util import make_overlay
from tests.util import parametrize


def test_small_grid_agrees_with_the_closed_form():
    assert oracle_grid(40, alpha=1.5) == []


@pytest.mark.slow
def test_full_grid_agrees_with_the_closed_form():
    assert oracle_grid(200) == []


@parametrize(['alpha', 'n_e', 'n_omega'], [1.0, 0, 1], [1.0, 1, 1], [2.0, 3, 7], [0.5, 199, 200])
def test_enumerate_efficacy(alpha, n_e, n_omega):
    assert enumerate_efficacy(alpha, n_e, n_omega) == pytest.approx(
        efficacy(alpha, n_e, n_omega).analytic, abs=1e-12
    )


class TestEnumerateContacts:
    def test_uniform(self):
        system, overlay = make_overlay(4, 10)
        assert enumerate_contacts(system, overlay, DemandModel(rate=2.0)) == pytest.approx(3.2, abs=1e-12)

    def test_exclude_self(self):
        system, overlay = make_overlay(4, 10)
        demand = DemandModel(target_rule=TargetRule.EXCLUDE_SELF)
        assert enumerate_contacts(system, overlay, demand) == pytest.approx(4 * 3 / 9, abs=1e-12)

    def test_contact_sets(self):
        system, overlay = make_overlay(2, 4)
        # node 1 reaches 2 of its contacts {2, 3}; node 2 draws uniformly over Ω
        demand = DemandModel(contact_sets={1: frozenset({2, 3})})
        assert enumerate_contacts(system, overlay, demand) == pytest.approx(1.0, abs=1e-12)

    def test_empty_network(self):
        system, overlay = make_overlay(0, 4)
        assert enumerate_contacts(system, overlay, DemandModel()) == 0.0


@parametrize(['n_e', 'n_omega'], [10, 40], [25, 50], [7, 7])
def test_simulation_agrees_with_enumeration(n_e, n_omega):
    system, overlay = make_overlay(n_e, n_omega)
    demand = DemandModel()
    exact = enumerate_contacts(system, overlay, demand)
    result = simulate_contacts(system, overlay, demand, SimConfig(seed=n_omega, attempts=100_000, trials=10))
    assert abs(result.throughput_hat - exact) <= 4 * result.stderr + 1e-12


def test_sampled_grid():
    points = sampled_grid(20, n_omega_step=10, n_e_points=4)
    assert points == [(0, 10), (2, 10), (5, 10), (8, 10), (10, 10), (0, 20), (5, 20), (10, 20), (15, 20), (20, 20)]
    assert sampled_grid(5, n_omega_step=5, n_e_points=10) == [(n_e, 5) for n_e in range(6)]


def test_small_simulation_grid():
    agreement = simulation_grid_agreement(
        [(0, 5), (5, 5), (3, 10), (20, 60)], cfg=SimConfig(seed=2, attempts=20_000, trials=10),
    )
    assert agreement.points == 4
    assert agreement.fraction == 1.0
    assert agreement.deviations == ()


def test_simulation_grid_reports_deviations():
    # a tiny gap tolerance turns every non-degenerate point into a deviation
    agreement = simulation_grid_agreement(
        [(0, 5), (3, 10), (20, 60)], cfg=SimConfig(seed=2, attempts=2_003, trials=4), max_gap=1e-9,
    )
    assert [(d.n_e, d.n_omega) for d in agreement.deviations] == [(3, 10), (20, 60)]
    assert agreement.fraction == pytest.approx(1 / 3)


def test_simulation_grid_needs_points():
    with pytest.raises(PreconditionError):
        simulation_grid_agreement([])


@pytest.mark.slow
def test_simulation_agrees_with_enumeration_on_the_grid():
    # N_Ω <= 200, 10^5 attempts per point: at least 99% within 4 standard errors
    points = sampled_grid(200)
    agreement = simulation_grid_agreement(points, cfg=SimConfig(seed=11, attempts=100_000, trials=20))
    assert agreement.points == len(points) > 400
    assert agreement.fraction >= 0.99, agreement.deviations


def test_loglog_slope():
    assert loglog_slope([1, 2, 4, 8], [3, 12, 48, 192]) == pytest.approx(2.0)


@parametrize(
    ['n_e_values', 'psi_values'],
    [[1, 2], [1]],
    [[1], [1]],
    [[0, 2], [1, 4]],
    [[1, 2], [1, -4]],
)
def test_loglog_slope_rejects(n_e_values, psi_values):
    with pytest.raises(PreconditionError):
        loglog_slope(n_e_values, psi_values)


@pytest.mark.slow
def test_quadratic_law():
    fit = quadratic_law_sweep(cfg=SimConfig(seed=0, attempts=200_000, trials=10))
    assert [p.n_e for p in fit.points] == list(range(100, 1000, 100))
    assert fit.slope == pytest.approx(2.0, abs=0.05)
