"""Annotation cleaning: duplicate objects, duplicate relations, self-relations, dangling relations."""

import logging

from src.graph.model import Relation, SceneGraph

logger = logging.getLogger(__name__)


def clean_graph(g: SceneGraph) -> SceneGraph:
    """
    Remove exact-duplicate objects (same label and box), self-relations,
    relations that reference an undeclared object and duplicate relation
    triples. Relations on a removed duplicate object are retargeted to the
    first occurrence before deduplication. Object ids are kept as they are.
    Idempotent.
    """
    first_by_key: dict[tuple[str, tuple[float, float, float, float]], int] = {}
    retarget: dict[int, int] = {}
    objects = []
    for obj in g.objects:
        key = (obj.label, obj.box.as_tuple())
        if key in first_by_key:
            retarget[obj.id] = first_by_key[key]
            continue
        first_by_key[key] = obj.id
        objects.append(obj)
    kept_ids = {obj.id for obj in objects}

    relations: list[Relation] = []
    seen: set[tuple[int, str, int]] = set()
    self_relations = 0
    dangling = 0
    for rel in g.relations:
        s = retarget.get(rel.subject_id, rel.subject_id)
        o = retarget.get(rel.object_id, rel.object_id)
        if s not in kept_ids or o not in kept_ids:
            dangling += 1
            continue
        if s == o:
            self_relations += 1
            continue
        moved = rel if (s, o) == (rel.subject_id, rel.object_id) else Relation(s, rel.predicate, o, rel.group)
        if moved.triple in seen:
            continue
        seen.add(moved.triple)
        relations.append(moved)

    if retarget or len(relations) != len(g.relations):
        logger.debug(
            "Cleaned %s: %d duplicate object(s), %d self-relation(s), %d dangling relation(s), "
            "%d duplicate relation(s)",
            g.frame_id or "graph", len(retarget), self_relations, dangling,
            len(g.relations) - len(relations) - self_relations - dangling,
        )
    return SceneGraph(schema=g.schema, objects=tuple(objects), relations=tuple(relations), frame_id=g.frame_id)
