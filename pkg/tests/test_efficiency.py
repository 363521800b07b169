import math

import numpy as np
import pytest

from tradeshock import (
    TradeNetwork,
    build_network,
    network_efficiency,
    normalized_efficiency,
    path_efficiency,
    shortest_path_costs,
)

from netgen import codes_for, complete_uniform_network, random_network
from oracles import all_pairs_costs, efficiency_oracle


def test_direct_edge_efficiency_is_the_weight():
    net = build_network([("A", "B", 7.5)])
    assert path_efficiency(net, "A", "B") == 7.5


def test_chain_efficiency_harmonic():
    net = build_network([("A", "B", 2.0), ("B", "C", 2.0)])
    # 1 / (1/2 + 1/2)
    assert path_efficiency(net, "A", "C") == 1.0


def test_heavy_detour_beats_weak_direct_edge():
    net = build_network([("A", "B", 1.0), ("A", "C", 100.0), ("C", "B", 100.0)])
    # two-hop cost 0.02 < direct cost 1.0
    assert path_efficiency(net, "A", "B") == pytest.approx(50.0)


def test_unreachable_pair_contributes_zero():
    net = build_network([("A", "B", 3.0)])
    assert path_efficiency(net, "B", "A") == 0.0


def test_same_node_pair_rejected():
    net = build_network([("A", "B", 3.0)])
    with pytest.raises(ValueError):
        path_efficiency(net, "A", "A")


def test_two_node_single_edge_closed_form():
    net = build_network([("A", "B", 8.0)])
    result = network_efficiency(net)
    assert result.raw_efficiency == pytest.approx(4.0, abs=1e-12)
    assert result.normalized_efficiency == pytest.approx(0.5, abs=1e-12)
    assert result.pair_count == 2


def test_complete_uniform_digraph_normalizes_to_one():
    net = complete_uniform_network(5, weight=3.0)
    result = network_efficiency(net)
    assert result.raw_efficiency == pytest.approx(3.0, abs=1e-12)
    assert result.normalized_efficiency == pytest.approx(1.0, abs=1e-12)


def test_empty_edge_set_is_zero():
    net = TradeNetwork(codes_for(4), np.zeros((4, 4)))
    result = network_efficiency(net)
    assert result.raw_efficiency == 0.0
    assert result.normalized_efficiency == 0.0
    assert not result.degenerate


def test_single_node_network_is_degenerate_zero():
    net = TradeNetwork(("A",), np.zeros((1, 1)))
    result = network_efficiency(net)
    assert result.degenerate
    assert result.raw_efficiency == 0.0


def test_denominator_keeps_full_node_count_under_masking():
    net = build_network([("A", "B", 4.0), ("B", "C", 4.0)])
    net.shock_nodes(["C"])
    result = network_efficiency(net)
    # only A->B survives, but the averaging set stays all N(N-1)=6 pairs
    assert result.raw_efficiency == pytest.approx(4.0 / 6.0, abs=1e-15)
    assert result.pair_count == 6


def test_matches_enumeration_oracle_on_random_graphs():
    rng = np.random.default_rng(21)
    for _ in range(30):
        net = random_network(rng, int(rng.integers(2, 9)), float(rng.uniform(0.2, 0.9)))
        assert network_efficiency(net).raw_efficiency == pytest.approx(
            efficiency_oracle(net), abs=1e-12
        )
        assert np.array_equal(shortest_path_costs(net), all_pairs_costs(net))


def test_scale_linearity():
    rng = np.random.default_rng(8)
    net = random_network(rng, 10, 0.4)
    base = network_efficiency(net).raw_efficiency
    for c in (1e-3, 7.0, 1e6):
        scaled = TradeNetwork(net.codes, net.baseline_weights * c)
        assert network_efficiency(scaled).raw_efficiency == pytest.approx(
            c * base, rel=1e-12
        )


def test_edge_removal_never_increases_efficiency():
    rng = np.random.default_rng(13)
    net = random_network(rng, 9, 0.5)
    base = network_efficiency(net).raw_efficiency
    for edge in list(net.active_edges())[:10]:
        work = net.fork()
        work.shock_edges([(edge.source, edge.target)])
        assert network_efficiency(work).raw_efficiency <= base


def test_symmetric_network_has_symmetric_pair_efficiencies():
    rng = np.random.default_rng(2)
    w = rng.uniform(1.0, 5.0, (6, 6))
    w = (w + w.T) / 2.0
    np.fill_diagonal(w, 0.0)
    net = TradeNetwork(codes_for(6), w)
    costs = shortest_path_costs(net)
    assert np.array_equal(costs, costs.T)


def test_normalized_efficiency_requires_positive_reference():
    net = build_network([("A", "B", 3.0)])
    for bad in (0.0, -1.0, math.nan, math.inf):
        with pytest.raises(ValueError):
            normalized_efficiency(net, bad)


def test_normalized_efficiency_uses_supplied_reference():
    net = build_network([("A", "B", 3.0)])
    result = normalized_efficiency(net, 6.0)
    assert result.reference_mean_weight == 6.0
    assert result.normalized_efficiency == result.raw_efficiency / 6.0


def test_result_fields_consistent():
    rng = np.random.default_rng(77)
    net = random_network(rng, 7, 0.6)
    result = network_efficiency(net)
    assert result.normalized_efficiency == result.raw_efficiency / result.reference_mean_weight
    assert result.raw_efficiency >= 0.0
    assert math.isfinite(result.raw_efficiency)
