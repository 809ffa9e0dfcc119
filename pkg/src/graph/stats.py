"""Per-graph counts used for monitoring and dataset statistics."""

from collections import Counter
from dataclasses import dataclass, field

from src.graph.model import SceneGraph


@dataclass(frozen=True)
class GraphStats:
    num_objects: int
    num_relations: int
    predicate_counts: dict[str, int] = field(default_factory=dict)

    @property
    def zero_relation(self) -> bool:
        return self.num_relations == 0


def graph_stats(g: SceneGraph) -> GraphStats:
    """Object count, relation count and predicate histogram of a graph."""
    return GraphStats(
        num_objects=len(g.objects),
        num_relations=len(g.relations),
        predicate_counts=dict(Counter(rel.key for rel in g.relations)),
    )
