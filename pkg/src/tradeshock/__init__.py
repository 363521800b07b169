"""Resilience analysis of international trade networks under shock and recovery."""

from .centrality import (
    EDGE_INDICATORS,
    NODE_INDICATORS,
    IndicatorKind,
    InfluenceRanking,
    ModuleIndicators,
    betweenness,
    closeness,
    clustering,
    degree,
    detect_communities,
    hits,
    module_indicators,
    pagerank,
    rank_edges,
    rank_nodes,
    strength,
)
from .efficiency import (
    EfficiencyResult,
    network_efficiency,
    normalized_efficiency,
    path_efficiency,
    shortest_path_costs,
)
from .ingest import (
    FLOW_EXPORT,
    FLOW_IMPORT,
    ParseReport,
    TradeFileError,
    TradeRecord,
    build_yearly_networks,
    network_to_records,
    parse_trade_file,
    write_trade_file,
)
from .network import (
    NetworkStats,
    ShockStateError,
    TradeEdge,
    TradeNetwork,
    build_network,
)
from .resilience import (
    ResilienceReport,
    lone,
    min_performance,
    rate_of_change,
    summarize,
)
from .simulation import (
    Phase,
    RandomControl,
    RecoveryOrder,
    ScenarioConfig,
    TargetKind,
    Trajectory,
    TrajectoryStep,
    rank_by_impact,
    run_random_control,
    run_shock_recovery,
    single_element_impact,
)

__version__ = "0.1.0"

__all__ = [
    "EDGE_INDICATORS",
    "EfficiencyResult",
    "FLOW_EXPORT",
    "FLOW_IMPORT",
    "IndicatorKind",
    "InfluenceRanking",
    "ModuleIndicators",
    "NODE_INDICATORS",
    "NetworkStats",
    "ParseReport",
    "Phase",
    "RandomControl",
    "RecoveryOrder",
    "ResilienceReport",
    "ScenarioConfig",
    "ShockStateError",
    "TargetKind",
    "TradeEdge",
    "TradeFileError",
    "TradeNetwork",
    "TradeRecord",
    "Trajectory",
    "TrajectoryStep",
    "betweenness",
    "build_network",
    "build_yearly_networks",
    "closeness",
    "clustering",
    "degree",
    "detect_communities",
    "hits",
    "lone",
    "min_performance",
    "module_indicators",
    "network_efficiency",
    "network_to_records",
    "normalized_efficiency",
    "pagerank",
    "parse_trade_file",
    "path_efficiency",
    "rank_by_impact",
    "rank_edges",
    "rank_nodes",
    "rate_of_change",
    "run_random_control",
    "run_shock_recovery",
    "shortest_path_costs",
    "single_element_impact",
    "strength",
    "summarize",
    "write_trade_file",
]
