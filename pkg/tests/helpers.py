"""Seeded random scene graphs shared by the property and oracle tests."""

import random
from typing import Optional, Sequence

from src.graph import (
    GROUP_ORDER,
    BoundingBox,
    Relation,
    RelationGroup,
    SceneGraph,
    SceneObject,
    Schema,
)

LABELS = ("zebra", "grass", "tree", "car", "dog", "table", "cup", "sky")
PREDICATES = ("on", "eating", "near", "holding", "parked-on", "beside")
HO_LABELS = ("cup", "table", "phone", "chair", "book", "door")
HO_PREDICATES = {
    RelationGroup.ATTENTION: ("looking_at", "not_looking_at", "unsure"),
    RelationGroup.SPATIAL: ("in_front_of", "behind", "beneath", "on_the_side_of"),
    RelationGroup.CONTACTING: ("holding", "touching", "sitting_on", "not_contacting"),
}


def random_box(rng: random.Random, width: int = 640, height: int = 480) -> BoundingBox:
    """A box with integer corners and positive area inside the frame."""
    x1 = rng.randint(0, width - 2)
    y1 = rng.randint(0, height - 2)
    return BoundingBox(x1, y1, rng.randint(x1 + 1, width), rng.randint(y1 + 1, height))


def random_graph(
    rng: random.Random,
    min_objects: int = 0,
    max_objects: int = 5,
    min_relations: int = 0,
    max_relations: int = 6,
    labels: Sequence[str] = LABELS,
    predicates: Sequence[str] = PREDICATES,
) -> SceneGraph:
    """A structurally valid object-relation graph with non-contiguous ids."""
    n = rng.randint(min_objects, max_objects)
    ids = sorted(rng.sample(range(3 * n + 1), n))
    objects = [SceneObject(i, rng.choice(labels), random_box(rng)) for i in ids]
    relations: list[Relation] = []
    if n >= 2:
        target = rng.randint(min_relations, max_relations)
        seen: set[tuple[int, str, int]] = set()
        for _ in range(200):
            if len(relations) >= target:
                break
            s, o = rng.sample(ids, 2)
            triple = (s, rng.choice(predicates), o)
            if triple in seen:
                continue
            seen.add(triple)
            relations.append(Relation(*triple))
    return SceneGraph(Schema.OBJECT_RELATION, tuple(objects), tuple(relations))


def random_ho_graph(rng: random.Random, max_objects: int = 5) -> SceneGraph:
    """A human-object graph: person first, grouped relations from the person."""
    n = rng.randint(0, max_objects)
    objects = [SceneObject(0, "person", random_box(rng))]
    objects += [SceneObject(i, rng.choice(HO_LABELS), random_box(rng)) for i in range(1, n + 1)]
    relations = []
    for obj in objects[1:]:
        for group in GROUP_ORDER:
            if rng.random() < 0.5:
                continue
            for predicate in rng.sample(HO_PREDICATES[group], rng.randint(1, 2)):
                relations.append(Relation(0, predicate, obj.id, group))
    return SceneGraph(Schema.HUMAN_OBJECT, tuple(objects), tuple(relations))


def _nudge(rng: random.Random, box: BoundingBox, amount: int) -> BoundingBox:
    x1 = min(max(box.x1 + rng.randint(-amount, amount), 0), 638)
    y1 = min(max(box.y1 + rng.randint(-amount, amount), 0), 478)
    x2 = max(min(box.x2 + rng.randint(-amount, amount), 640), x1 + 1)
    y2 = max(min(box.y2 + rng.randint(-amount, amount), 480), y1 + 1)
    return BoundingBox(x1, y1, x2, y2)


def perturbed_graph(
    rng: random.Random,
    gt: SceneGraph,
    labels: Sequence[str] = LABELS,
    predicates: Sequence[str] = PREDICATES,
    max_extra_relations: Optional[int] = 6,
) -> SceneGraph:
    """
    A prediction near gt: some objects dropped, boxes nudged, labels and
    predicates swapped, relations dropped or added.
    """
    objects = []
    for obj in gt.objects:
        if rng.random() < 0.2:
            continue
        label = rng.choice(labels) if rng.random() < 0.2 else obj.label
        objects.append(SceneObject(obj.id, label, _nudge(rng, obj.box, rng.choice((0, 5, 40)))))
    if rng.random() < 0.3:
        objects.append(SceneObject(max((o.id for o in gt.objects), default=0) + 1, rng.choice(labels), random_box(rng)))
    ids = [o.id for o in objects]

    seen: set[tuple[int, str, int]] = set()
    relations = []
    for rel in gt.relations:
        if rel.subject_id not in ids or rel.object_id not in ids or rng.random() < 0.2:
            continue
        predicate = rng.choice(predicates) if rng.random() < 0.2 else rel.predicate
        triple = (rel.subject_id, predicate, rel.object_id)
        if triple not in seen:
            seen.add(triple)
            relations.append(Relation(*triple))
    if len(ids) >= 2 and max_extra_relations:
        for _ in range(rng.randint(0, 2)):
            if len(relations) >= max_extra_relations:
                break
            s, o = rng.sample(ids, 2)
            triple = (s, rng.choice(predicates), o)
            if triple not in seen:
                seen.add(triple)
                relations.append(Relation(*triple))
    return SceneGraph(gt.schema, tuple(objects), tuple(relations))
