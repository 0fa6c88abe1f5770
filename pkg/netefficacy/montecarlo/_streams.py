"""
Counter-based random streams.

Every draw is a pure function of ``(seed, trial, position)``: the Philox key
holds the 64-bit seed and the trial index, the counter advances with the
number of values drawn. Trials can therefore run in any order, on any number
of workers, and reproduce bit-identical results. The most significant word of
the counter separates streams used for different purposes, so that sampling
an overlay never overlaps the contact attempts of trial 0.
"""
from __future__ import annotations

import enum

import numpy as np

from netefficacy._model import InformationSystem
from netefficacy._util import check_count
from netefficacy._util import require
from netefficacy.typing import NodeId

SEED_BITS = 64
MAX_SEED = 2 ** SEED_BITS - 1


class Purpose(enum.IntEnum):
    CONTACTS = 0
    MEMBERSHIP = 1
    CONTACT_SETS = 2


def _philox(seed: int, trial: int, purpose: Purpose) -> np.random.Philox:
    check_count(seed, 'seed')
    check_count(trial, 'trial')
    require(seed <= MAX_SEED and trial <= MAX_SEED, 'seed and trial must fit in 64 bits')
    key = seed | (trial << SEED_BITS)
    counter = int(purpose) << 192
    return np.random.Philox(key=key, counter=counter)


def trial_stream(seed: int, trial: int) -> np.random.Generator:
    """The stream of contact attempts of trial ``trial``."""
    return np.random.Generator(_philox(seed, trial, Purpose.CONTACTS))


def purpose_stream(seed: int, purpose: Purpose) -> np.random.Generator:
    """A stream, independent from every trial stream, for auxiliary sampling."""
    return np.random.Generator(_philox(seed, 0, purpose))


def sample_members(members: frozenset[NodeId], keep: int, seed: int) -> frozenset[NodeId]:
    """``keep`` members chosen uniformly without replacement."""
    ordered = np.array(sorted(members), dtype=np.int64)
    rng = purpose_stream(seed, Purpose.MEMBERSHIP)
    chosen = rng.choice(ordered, size=keep, replace=False)
    return frozenset(int(node) for node in chosen)


def _floyd_subset(draws: list[int], n: int) -> set[int]:
    # draws[i] is uniform in [0, n - len(draws) + i]
    chosen: set[int] = set()
    for j, t in enumerate(draws, start=n - len(draws)):
        chosen.add(j if t in chosen else t)
    return chosen


def sample_contact_sets(system: InformationSystem, size: int, seed: int = 0) -> dict[NodeId, frozenset[NodeId]]:
    """A contact set A ⊆ Ω of ``size`` nodes for every node of ``system``,
    sampled uniformly without replacement, node by node in ascending order.

    Every set costs O(size) (Floyd's subset sampling), so the total cost is
    that of the output whatever the size of Ω.
    """
    check_count(size, 'size', minimum=1)
    require(size <= system.size, f'contact sets of {size} nodes do not fit in a system of {system.size}')
    omega = sorted(system.nodes)
    n = len(omega)
    rng = purpose_stream(seed, Purpose.CONTACT_SETS)
    draws = rng.integers(0, np.arange(n - size, n) + 1, size=(n, size))
    return {
        node: frozenset(omega[i] for i in _floyd_subset(row, n))
        for node, row in zip(omega, draws.tolist())
    }
