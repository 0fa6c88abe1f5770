"""
Link-counting vs node-counting valuations of a network.

Counting directed links values a network of N nodes as N(N−1); counting nodes
values it as N. The functions here compute both, and the quantities showing
why link counting doesn't hold up: a link's share of its terminal node, the
gain obtained by merely splitting nodes, the unique share of the traffic and
the per-link value that a bridging node forces.

Ratios are returned as :class:`fractions.Fraction` so that identities such
as ``density * link_value == n`` hold exactly.
"""
from __future__ import annotations

import dataclasses as dc
import math
from collections.abc import Iterable
from fractions import Fraction
from typing import NamedTuple

import networkx as nx

from netefficacy._util import check_count


@dc.dataclass(frozen=True)
class ValueComparison:
    n: int
    link_value: int
    node_value: int
    link_share: Fraction | None
    density: Fraction | None

    @property
    def value_per_user(self) -> int:
        """Link value per node: N−1."""
        return self.link_value // self.n


def compare_value_models(n: int) -> ValueComparison:
    """Link and node valuation of a complete network of ``n`` nodes.
    ``link_share`` and ``density`` are ``None`` for a single node."""
    check_count(n, 'n', minimum=1)
    share = Fraction(1, n - 1) if n >= 2 else None
    return ValueComparison(n=n, link_value=n * (n - 1), node_value=n, link_share=share, density=share)


class SplitOutcome(NamedTuple):
    link_ratio: Fraction
    resource_ratio: int
    per_resource_gain: Fraction


def split_contradiction(n: int, k: int) -> SplitOutcome:
    """
    Split every node of an ``n``-node network into ``k`` nodes. The resources
    (people, terminals) grow ``k`` times but the link count grows about ``k²``
    times, so link counting claims a gain of about ``k`` per resource from a
    purely nominal change.
    """
    check_count(n, 'n', minimum=2)
    check_count(k, 'k', minimum=1)
    kn = k * n
    link_ratio = Fraction(kn * (kn - 1), n * (n - 1))
    return SplitOutcome(link_ratio, k, link_ratio / k)


def information_density(n: int) -> Fraction:
    """Unique payload over delivered payload when each of ``n`` nodes
    broadcasts one payload to the other ``n − 1``: ``1/(n−1)``, about ``1/n``
    for large networks."""
    check_count(n, 'n', minimum=2)
    return Fraction(n, n * (n - 1))


class BridgeVerdict(NamedTuple):
    n: int
    link_value: Fraction
    x_links: int
    y_links: int
    node_values: dict[str, int]
    passed: bool


def bridge_graph(n: int) -> nx.Graph:
    """Node ``X`` linked to ``n − 1`` others, one of which is ``Y``. Removing
    ``X`` splits the network: ``X`` bridges ``Y``'s side and the rest."""
    check_count(n, 'n', minimum=3)
    graph = nx.star_graph(n - 1)
    return nx.relabel_nodes(graph, {0: 'X', 1: 'Y'})


def bridge_value_check(n: int) -> BridgeVerdict:
    """
    Both ``X`` (with ``n − 1`` links) and ``Y`` (with one) reach every node of
    the network, so they receive the same service. If each link carried a
    value V, equal service would require ``V·(n−1) = V·1``, whose only solution
    for ``n ≥ 3`` is ``V = 0``. Valuing nodes instead gives X and Y one unit
    each.
    """
    graph = bridge_graph(n)
    x_links, y_links = graph.degree['X'], graph.degree['Y']
    equal_service = nx.node_connected_component(graph, 'X') == nx.node_connected_component(graph, 'Y')
    # V·x_links = V·y_links  ⇔  V·(x_links − y_links) = 0
    coefficient = x_links - y_links
    link_value = Fraction(0) if coefficient != 0 else Fraction(1)
    node_values = {'X': 1, 'Y': 1}
    passed = equal_service and link_value == 0 and node_values['X'] == node_values['Y']
    return BridgeVerdict(n, link_value, x_links, y_links, node_values, passed)


class ValueRow(NamedTuple):
    n: int
    link_value: int
    node_value: int
    n_log_n: float


def value_table(sizes: Iterable[int]) -> list[ValueRow]:
    """Rows of N(N−1), N and N·ln N for a visual comparison of the valuations."""
    rows = []
    for n in sizes:
        cmp = compare_value_models(n)
        rows.append(ValueRow(n, cmp.link_value, cmp.node_value, n * math.log(n)))
    return rows
