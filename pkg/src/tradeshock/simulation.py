"""Shock-recovery scenario execution and single-element impact scans.

A scenario forks the network, freezes the baseline mean edge weight as the
normalization reference, then removes targets in ranked batches down to the
configured depth and restores them in batches of the same size. Normalized
efficiency is recorded after every batch, so each trajectory is a staircase
from the intact network through maximum disruption and back. Restoring
every shocked element reproduces the starting masks exactly, so the final
trajectory value equals the baseline value bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .centrality import (
    EDGE_INDICATORS,
    IndicatorKind,
    rank_edges,
    rank_nodes,
    strength,
)
from .efficiency import network_efficiency
from .network import TradeNetwork


class TargetKind(str, Enum):
    nodes = "nodes"
    edges = "edges"


class RecoveryOrder(str, Enum):
    shock_order = "shock_order"
    reverse_shock_order = "reverse_shock_order"


class Phase(str, Enum):
    baseline = "baseline"
    shock = "shock"
    recovery = "recovery"


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything needed to replay one scenario on a given network."""

    target_kind: TargetKind
    indicator: IndicatorKind
    batch_fraction: float = 0.01
    shock_depth: float = 0.5
    recovery_order: RecoveryOrder = RecoveryOrder.shock_order
    replicates: int = 20
    master_seed: int = 0
    recompute_rankings: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "target_kind", TargetKind(self.target_kind))
        object.__setattr__(self, "indicator", IndicatorKind(self.indicator))
        object.__setattr__(self, "recovery_order", RecoveryOrder(self.recovery_order))
        if not 0.0 < self.batch_fraction <= self.shock_depth <= 1.0:
            raise ValueError(
                "need 0 < batch_fraction <= shock_depth <= 1, got "
                f"batch_fraction={self.batch_fraction}, shock_depth={self.shock_depth}"
            )
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        if self.target_kind is TargetKind.edges:
            if self.indicator not in EDGE_INDICATORS:
                raise ValueError(
                    f"edge scenarios rank by edge_weight or random, not {self.indicator.value}"
                )
        elif self.indicator is IndicatorKind.edge_weight:
            raise ValueError("edge_weight does not rank nodes")


@dataclass(frozen=True)
class TrajectoryStep:
    t: int
    ne: float
    phase: Phase
    elements: tuple


@dataclass(frozen=True)
class Trajectory:
    """Normalized-efficiency time series with its phase anchors.

    t_0/t_d/t_r/t_rs index into steps: baseline, disruption onset, end of
    the disruptive stage (maximum applied shock), and end of recovery.
    """

    steps: tuple[TrajectoryStep, ...]
    t_0: int
    t_d: int
    t_r: int
    t_rs: int
    reference_mean_weight: float

    @property
    def ne0(self) -> float:
        return self.steps[self.t_0].ne

    def phase_steps(self, phase: Phase) -> tuple[TrajectoryStep, ...]:
        return tuple(s for s in self.steps if s.phase is phase)

    def ne_values(self) -> np.ndarray:
        return np.array([s.ne for s in self.steps])


def _child_seed(master_seed: int, *keys: int) -> int:
    return int(np.random.SeedSequence([int(master_seed), *map(int, keys)]).generate_state(1)[0])


def _normalized_ne(net: TradeNetwork, reference: float) -> float:
    return network_efficiency(net).raw_efficiency / reference


def _ranked_targets(net: TradeNetwork, config: ScenarioConfig, seed: int) -> tuple:
    if config.target_kind is TargetKind.nodes:
        return rank_nodes(net, config.indicator, seed=seed).ordered_items
    return rank_edges(net, config.indicator, seed=seed).ordered_items


def _apply_shock(net: TradeNetwork, target_kind: TargetKind, chunk: Sequence) -> None:
    if target_kind is TargetKind.nodes:
        net.shock_nodes(chunk)
    else:
        net.shock_edges(chunk)


def _chunked(items: Sequence, size: int) -> Iterable[tuple]:
    for start in range(0, len(items), size):
        yield tuple(items[start : start + size])


def run_shock_recovery(net: TradeNetwork, config: ScenarioConfig) -> Trajectory:
    """Execute one full shock-then-recovery scenario and return its trajectory."""
    work = net.fork()
    reference = work.stats().mean_edge_weight
    if reference <= 0:
        raise ValueError("scenario needs a network with at least one active edge")
    if config.target_kind is TargetKind.nodes:
        n_targets = work.n_active_nodes
    else:
        n_targets = work.n_active_edges
    if config.shock_depth * n_targets < 1:
        raise ValueError(
            f"shock depth {config.shock_depth} of {n_targets} targets covers "
            "less than one element; nothing to shock"
        )
    batch = math.ceil(config.batch_fraction * n_targets)
    total = math.ceil(config.shock_depth * n_targets)

    steps = [TrajectoryStep(0, _normalized_ne(work, reference), Phase.baseline, ())]
    shocked: list = []
    if config.recompute_rankings:
        # Re-rank the survivors before every batch; random draws get a fresh
        # stream per step so replicates stay independent across steps too.
        step_index = 0
        while len(shocked) < total:
            take = min(batch, total - len(shocked))
            ranked = _ranked_targets(work, config, _child_seed(config.master_seed, step_index))
            chunk = tuple(ranked[:take])
            _apply_shock(work, config.target_kind, chunk)
            shocked.extend(chunk)
            steps.append(
                TrajectoryStep(len(steps), _normalized_ne(work, reference), Phase.shock, chunk)
            )
            step_index += 1
    else:
        ranked = _ranked_targets(work, config, config.master_seed)
        for chunk in _chunked(ranked[:total], batch):
            _apply_shock(work, config.target_kind, chunk)
            shocked.extend(chunk)
            steps.append(
                TrajectoryStep(len(steps), _normalized_ne(work, reference), Phase.shock, chunk)
            )
    t_r = len(steps) - 1

    if config.recovery_order is RecoveryOrder.shock_order:
        recovery_sequence: list = shocked
    else:
        recovery_sequence = shocked[::-1]
    for chunk in _chunked(recovery_sequence, batch):
        work.restore(chunk)
        steps.append(
            TrajectoryStep(len(steps), _normalized_ne(work, reference), Phase.recovery, chunk)
        )
    return Trajectory(
        steps=tuple(steps),
        t_0=0,
        t_d=0,
        t_r=t_r,
        t_rs=len(steps) - 1,
        reference_mean_weight=reference,
    )


@dataclass(frozen=True)
class RandomControl:
    """Pointwise mean trajectory over random-target replicates, with spread."""

    mean: Trajectory
    std: tuple[float, ...]
    replicates: tuple[Trajectory, ...]


def run_random_control(net: TradeNetwork, config: ScenarioConfig) -> RandomControl:
    """Average a random-targeting scenario over independent replicates.

    Each replicate runs the same protocol with its own child seed derived
    from (master_seed, replicate index). The std is the population spread
    at each step; it is exactly zero at the baseline step.
    """
    if config.replicates < 2:
        raise ValueError(f"a random control needs >= 2 replicates, got {config.replicates}")
    runs = []
    for r in range(config.replicates):
        cfg = replace(
            config,
            indicator=IndicatorKind.random,
            master_seed=_child_seed(config.master_seed, r),
            replicates=1,
        )
        runs.append(run_shock_recovery(net, cfg))
    ne = np.array([[s.ne for s in t.steps] for t in runs])
    mean = ne.mean(axis=0)
    std = ne.std(axis=0)
    template = runs[0]
    steps = tuple(
        TrajectoryStep(s.t, float(mean[k]), s.phase, ())
        for k, s in enumerate(template.steps)
    )
    mean_traj = Trajectory(
        steps=steps,
        t_0=template.t_0,
        t_d=template.t_d,
        t_r=template.t_r,
        t_rs=template.t_rs,
        reference_mean_weight=template.reference_mean_weight,
    )
    return RandomControl(mean_traj, tuple(float(x) for x in std), tuple(runs))


def single_element_impact(net: TradeNetwork, element: str | tuple[str, str]) -> float:
    """Drop in normalized efficiency when one node or edge is removed alone."""
    work = net.fork()
    reference = work.stats().mean_edge_weight
    if reference <= 0:
        raise ValueError("impact needs a network with at least one active edge")
    before = _normalized_ne(work, reference)
    if isinstance(element, str):
        work.shock_nodes([element])
    else:
        work.shock_edges([tuple(element)])
    return before - _normalized_ne(work, reference)


def rank_by_impact(net: TradeNetwork, target_kind: TargetKind | str, top_k: int) -> list:
    """Most damaging single removals, as (element, impact) pairs.

    Every active element is removed alone, measured, and restored on one
    shared fork. Ties break by total strength then code for nodes, and by
    (source, target) for edges.
    """
    kind = TargetKind(target_kind)
    if top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    work = net.fork()
    reference = work.stats().mean_edge_weight
    if reference <= 0:
        raise ValueError("impact needs a network with at least one active edge")
    before = _normalized_ne(work, reference)

    results: list[tuple] = []
    if kind is TargetKind.nodes:
        tie_strength = strength(net, "out") + strength(net, "in")
        active = net.active_node_mask
        for i in range(net.n_nodes):
            if not active[i]:
                continue
            code = net.code_of(i)
            work.shock_nodes([code])
            impact = before - _normalized_ne(work, reference)
            work.restore([code])
            results.append((code, impact, float(tie_strength[i])))
        results.sort(key=lambda item: (-item[1], -item[2], item[0]))
        return [(code, impact) for code, impact, _ in results[:top_k]]

    for edge in net.active_edges():
        pair = (edge.source, edge.target)
        work.shock_edges([pair])
        impact = before - _normalized_ne(work, reference)
        work.restore([pair])
        results.append((pair, impact))
    results.sort(key=lambda item: (-item[1], item[0][0], item[0][1]))
    return results[:top_k]
