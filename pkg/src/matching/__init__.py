from .geometry import giou, iou, l1_box, pairwise_giou, pairwise_iou, pairwise_l1
from .hungarian import assignment_cost, hungarian
from .matcher import (
    MatchConfig,
    MatchResult,
    PairScore,
    match_graphs,
    match_objects,
    match_relations,
    max_bipartite_pairs,
)

__all__ = [
    "giou",
    "iou",
    "l1_box",
    "pairwise_giou",
    "pairwise_iou",
    "pairwise_l1",
    "assignment_cost",
    "hungarian",
    "MatchConfig",
    "MatchResult",
    "PairScore",
    "match_graphs",
    "match_objects",
    "match_relations",
    "max_bipartite_pairs",
]
