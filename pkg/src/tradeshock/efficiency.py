"""Weighted network efficiency, the performance indicator behind every scenario.

Metric convention (everything downstream depends on it): an active edge of
trade volume ``w`` contributes length ``1/w`` to a path. The best route
between two economies is the directed path minimizing the summed length,
and the pair efficiency is the reciprocal of that minimum, so a single
heavy edge is a better route than any detour through light ones. Pairs
with no active route contribute 0. Network efficiency averages the pair
efficiencies over all N(N-1) ordered pairs of the *full* node set; the
denominator stays fixed while nodes are masked, so trajectories taken
during a scenario remain comparable step to step.

Dividing the raw efficiency by a mean edge weight makes values comparable
across networks of different total volume. For cross-year reporting each
year is normalized by its own mean; during a shock-recovery scenario the
reference is frozen at the baseline mean so the trajectory reflects
structural damage, not renormalization drift.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .network import TradeNetwork


@dataclass(frozen=True)
class EfficiencyResult:
    raw_efficiency: float
    normalized_efficiency: float
    reference_mean_weight: float
    pair_count: int
    degenerate: bool = False  # fewer than 2 nodes: efficiency defined as 0


def _length_graph(net: TradeNetwork) -> csr_matrix:
    rows, cols = np.nonzero(net.active_edge_mask)
    lengths = 1.0 / net.baseline_weights[rows, cols]
    return csr_matrix((lengths, (rows, cols)), shape=(net.n_nodes, net.n_nodes))


def shortest_path_costs(net: TradeNetwork, sources=None) -> np.ndarray:
    """Minimum path lengths (sums of 1/w) between nodes of the active graph.

    Returns the full matrix when ``sources`` is None, otherwise the rows
    for the given source indices. Unreachable pairs are ``inf``.
    """
    graph = _length_graph(net)
    if sources is None:
        return dijkstra(graph, directed=True)
    return dijkstra(graph, directed=True, indices=sources)


def path_efficiency(net: TradeNetwork, source: str, target: str) -> float:
    """Pair efficiency: reciprocal best-route length, 0 when unreachable."""
    i, j = net.index_of(source), net.index_of(target)
    if i == j:
        raise ValueError(f"path efficiency is undefined for a node with itself ({source!r})")
    cost = shortest_path_costs(net, sources=i)[j]
    return 0.0 if np.isinf(cost) else 1.0 / float(cost)


def network_efficiency(net: TradeNetwork) -> EfficiencyResult:
    """Average pair efficiency over all ordered pairs of the full node set.

    The returned result is also normalized by the network's own active
    mean edge weight (the per-year convention); callers running scenarios
    should normalize with a frozen reference via :func:`normalized_efficiency`.
    """
    n = net.n_nodes
    if n < 2:
        return EfficiencyResult(0.0, 0.0, 0.0, 0, degenerate=True)
    costs = shortest_path_costs(net)
    with np.errstate(divide="ignore"):
        pair_eff = 1.0 / costs
    np.fill_diagonal(pair_eff, 0.0)  # diagonal costs are 0 -> inf
    pair_eff[np.isinf(costs)] = 0.0  # unreachable pairs contribute nothing
    raw = float(pair_eff.sum()) / (n * (n - 1))
    reference = net.stats().mean_edge_weight
    normalized = raw / reference if reference > 0 else 0.0
    return EfficiencyResult(raw, normalized, reference, n * (n - 1))


def normalized_efficiency(net: TradeNetwork, reference_mean_weight: float) -> EfficiencyResult:
    """Network efficiency normalized by a caller-supplied mean edge weight."""
    ref = float(reference_mean_weight)
    if not np.isfinite(ref) or ref <= 0:
        raise ValueError(f"reference mean weight must be positive and finite, got {ref}")
    base = network_efficiency(net)
    return EfficiencyResult(
        base.raw_efficiency,
        base.raw_efficiency / ref,
        ref,
        base.pair_count,
        base.degenerate,
    )
