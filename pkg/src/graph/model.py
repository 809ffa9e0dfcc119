"""
Core scene graph data model.

A SceneGraph is an ordered list of objects (each with an id, a category label
and a box in the resized 640x480 frame) plus an ordered list of directed
relations that reference objects by id. Everything here is an immutable value;
validation lives in src.graph.validation and never raises.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

IMAGE_WIDTH = 640
IMAGE_HEIGHT = 480

HUMAN_LABEL = "person"


class Schema(Enum):
    OBJECT_RELATION = "object-relation"
    HUMAN_OBJECT = "human-object"


class RelationGroup(Enum):
    ATTENTION = "attention"
    SPATIAL = "spatial"
    CONTACTING = "contacting"


# Emission order of relation groups in the human-object schema
GROUP_ORDER: tuple[RelationGroup, ...] = (
    RelationGroup.ATTENTION,
    RelationGroup.SPATIAL,
    RelationGroup.CONTACTING,
)


def round_half_away(value: float) -> int:
    """Round to the nearest integer, ties away from zero (2.5 -> 3, -2.5 -> -3)."""
    return int(math.copysign(math.floor(abs(value) + 0.5), value))


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box in resized-image pixel coordinates."""
    x1: float
    y1: float
    x2: float
    y2: float

    @property
    def width(self) -> float:
        return self.x2 - self.x1

    @property
    def height(self) -> float:
        return self.y2 - self.y1

    @property
    def area(self) -> float:
        return max(self.width, 0.0) * max(self.height, 0.0)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x1, self.y1, self.x2, self.y2)

    def rounded(self) -> tuple[int, int, int, int]:
        """Integer coordinates as written by the TOON and JSON serializers."""
        return (
            round_half_away(self.x1),
            round_half_away(self.y1),
            round_half_away(self.x2),
            round_half_away(self.y2),
        )


@dataclass(frozen=True)
class SceneObject:
    """A graph node: per-graph id, category label and box."""
    id: int
    label: str
    box: BoundingBox


@dataclass(frozen=True)
class Relation:
    """A directed edge <subject, predicate, object> between two object ids."""
    subject_id: int
    predicate: str
    object_id: int
    group: Optional[RelationGroup] = None  # human-object schema only

    @property
    def key(self) -> str:
        """Predicate qualified by its group, the unit compared during matching."""
        if self.group is None:
            return self.predicate
        return f"{self.group.value}:{self.predicate}"

    @property
    def triple(self) -> tuple[int, str, int]:
        return (self.subject_id, self.key, self.object_id)


def _group_rank(relation: Relation) -> int:
    if relation.group is None:
        return len(GROUP_ORDER)
    return GROUP_ORDER.index(relation.group)


def canonical_relation_order(relations: Iterable[Relation]) -> tuple[Relation, ...]:
    """
    Order human-object relations the way TOON rows group them: by first
    appearance of the target object, then attention/spatial/contacting,
    keeping the original order inside a group.
    """
    ordered = list(relations)
    first_seen: dict[int, int] = {}
    for rel in ordered:
        first_seen.setdefault(rel.object_id, len(first_seen))
    return tuple(sorted(ordered, key=lambda r: (first_seen[r.object_id], _group_rank(r))))


@dataclass(frozen=True)
class SceneGraph:
    """
    Objects and relations for one image or frame.

    Objects are kept sorted by id. In the human-object schema relations are
    kept in canonical row order (see canonical_relation_order). frame_id is
    envelope metadata and does not take part in equality.
    """
    schema: Schema = Schema.OBJECT_RELATION
    objects: tuple[SceneObject, ...] = ()
    relations: tuple[Relation, ...] = ()
    frame_id: Optional[str] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        objects = tuple(sorted(self.objects, key=lambda o: o.id))
        relations = tuple(self.relations)
        if self.schema is Schema.HUMAN_OBJECT:
            relations = canonical_relation_order(relations)
        object.__setattr__(self, "objects", objects)
        object.__setattr__(self, "relations", relations)

    def positions(self) -> dict[int, int]:
        """Map object id -> position in the object list (first occurrence wins)."""
        index: dict[int, int] = {}
        for pos, obj in enumerate(self.objects):
            index.setdefault(obj.id, pos)
        return index

    def object_by_id(self, object_id: int) -> Optional[SceneObject]:
        pos = self.positions().get(object_id)
        return None if pos is None else self.objects[pos]

    @property
    def human(self) -> Optional[SceneObject]:
        """The human of a human-object graph (always the first object)."""
        if self.schema is not Schema.HUMAN_OBJECT or not self.objects:
            return None
        return self.objects[0]

    @property
    def is_empty(self) -> bool:
        return not self.objects and not self.relations
