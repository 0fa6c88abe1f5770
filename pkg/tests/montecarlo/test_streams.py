from __future__ import annotations

from collections import Counter

import numpy as np
import pytest

from netefficacy import InformationSystem
from netefficacy.exceptions import PreconditionError
from netefficacy.montecarlo import MAX_SEED
from netefficacy.montecarlo import Purpose
from netefficacy.montecarlo import purpose_stream
from netefficacy.montecarlo import sample_contact_sets
from netefficacy.montecarlo import sample_members
from netefficacy.montecarlo import trial_stream
from tests.util import parametrize


def test_trial_stream_is_a_function_of_seed_and_trial():
    first = trial_stream(42, 3).random(1000)
    again = trial_stream(42, 3).random(1000)
    np.testing.assert_array_equal(first, again)


@parametrize(['seed', 'trial'], [43, 3], [42, 4], [42 + (1 << 32), 3])
def test_trial_streams_are_distinct(seed, trial):
    reference = trial_stream(42, 3).integers(0, 1 << 62, size=16)
    other = trial_stream(seed, trial).integers(0, 1 << 62, size=16)
    assert not np.array_equal(reference, other)


def test_purpose_streams_do_not_overlap_trial_zero():
    contacts = trial_stream(0, 0).integers(0, 1 << 62, size=16)
    for purpose in (Purpose.MEMBERSHIP, Purpose.CONTACT_SETS):
        assert not np.array_equal(contacts, purpose_stream(0, purpose).integers(0, 1 << 62, size=16))


def test_extreme_seeds_are_accepted():
    trial_stream(MAX_SEED, MAX_SEED).random()


@parametrize(['seed', 'trial'], [-1, 0], [MAX_SEED + 1, 0], [0, MAX_SEED + 1], [0, -1])
def test_out_of_range_stream_arguments(seed, trial):
    with pytest.raises(PreconditionError):
        trial_stream(seed, trial)


def test_sample_members():
    members = frozenset(range(1, 101))
    kept = sample_members(members, 25, seed=9)
    assert len(kept) == 25
    assert kept <= members
    assert kept == sample_members(members, 25, seed=9)
    assert kept != sample_members(members, 25, seed=10)
    assert sample_members(members, 0, seed=9) == frozenset()


def test_sample_contact_sets():
    system = InformationSystem.of_size(20)
    sets = sample_contact_sets(system, 5, seed=1)
    assert sets.keys() == system.nodes
    assert all(len(contacts) == 5 and contacts <= system.nodes for contacts in sets.values())
    assert sets == sample_contact_sets(system, 5, seed=1)


def test_contact_sets_as_large_as_the_system():
    system = InformationSystem.of_size(7)
    assert all(contacts == system.nodes for contacts in sample_contact_sets(system, 7).values())


def test_contact_sets_are_spread_uniformly():
    system = InformationSystem.of_size(400)
    sets = sample_contact_sets(system, 20, seed=4)
    counts = Counter(node for contacts in sets.values() for node in contacts)
    # 8000 picks; each half of Ω expects 4000 with a standard deviation of about 45
    low = sum(counts[node] for node in range(1, 201))
    assert abs(low - 4000) < 300
    assert max(counts.values()) < 60


def test_contact_sets_of_a_large_system():
    system = InformationSystem.of_size(50_000)
    sets = sample_contact_sets(system, 3, seed=2)
    assert len(sets) == 50_000
    assert all(len(contacts) == 3 for contacts in sets.values())


@parametrize('size', 0, 21)
def test_sample_contact_sets_rejects_sizes(size):
    with pytest.raises(PreconditionError):
        sample_contact_sets(InformationSystem.of_size(20), size)
