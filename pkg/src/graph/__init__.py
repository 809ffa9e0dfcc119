from .model import (
    GROUP_ORDER,
    IMAGE_HEIGHT,
    IMAGE_WIDTH,
    BoundingBox,
    Relation,
    RelationGroup,
    SceneGraph,
    SceneObject,
    Schema,
    round_half_away,
)
from .stats import GraphStats, graph_stats
from .validation import ValidationReport, Violation, ViolationCode, validate_graph
from .vocabulary import Vocabulary, load_label_yaml, load_vocabulary, require_names

__all__ = [
    "GROUP_ORDER",
    "IMAGE_HEIGHT",
    "IMAGE_WIDTH",
    "BoundingBox",
    "Relation",
    "RelationGroup",
    "SceneGraph",
    "SceneObject",
    "Schema",
    "round_half_away",
    "GraphStats",
    "graph_stats",
    "ValidationReport",
    "Violation",
    "ViolationCode",
    "validate_graph",
    "Vocabulary",
    "load_label_yaml",
    "load_vocabulary",
    "require_names",
]
