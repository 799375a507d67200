from app.meat.contraction import ContractedTimetable, contract_footpaths
from app.meat.delay import (
    DelayModel,
    delay_cdf,
    delay_quantile,
    expected_delay,
    expected_delay_numeric,
)
from app.meat.graph import (
    CompactArc,
    CompactDecisionGraph,
    DecisionGraph,
    compact_representation,
    decision_graph_eat,
    extract_decision_graph,
    to_dot,
    to_text,
)
from app.meat.scan import (
    EatProfile,
    EatProfileStore,
    eat_lower_bound,
    esat,
    meat_profile_scan,
    reachable_connections,
)
from app.meat.solver import MeatSolution, solve_alpha_bounded

__all__ = [
    "CompactArc",
    "CompactDecisionGraph",
    "ContractedTimetable",
    "DecisionGraph",
    "DelayModel",
    "EatProfile",
    "EatProfileStore",
    "MeatSolution",
    "compact_representation",
    "contract_footpaths",
    "decision_graph_eat",
    "delay_cdf",
    "delay_quantile",
    "eat_lower_bound",
    "esat",
    "expected_delay",
    "expected_delay_numeric",
    "extract_decision_graph",
    "meat_profile_scan",
    "reachable_connections",
    "solve_alpha_bounded",
    "to_dot",
    "to_text",
]
