"""
Canonical JSON form of a scene graph.

    {"objects":[{"id":0,"label":"zebra","bbox":[12,40,300,400]}],
     "relations":[{"subject":0,"predicate":"eating","object":2}]}

Human-object relations carry a fourth key, "group". Serialization is compact
(no spaces) with fixed key order; parsing accepts any key order. The schema
file lives in docs/annotation.schema.json.
"""

import json
import logging
from typing import Any, Optional

from src.errors import SerializationError
from src.graph.model import BoundingBox, Relation, RelationGroup, Schema, SceneGraph, SceneObject
from src.graph.validation import ViolationCode, validate_graph
from src.toon.outcome import Diagnostic, DiagnosticCode, ParseOutcome

logger = logging.getLogger(__name__)


def graph_to_dict(g: SceneGraph) -> dict[str, Any]:
    """Canonical dict form (integer coordinates, fixed key order)."""
    relations = []
    for rel in g.relations:
        item: dict[str, Any] = {"subject": rel.subject_id, "predicate": rel.predicate, "object": rel.object_id}
        if rel.group is not None:
            item["group"] = rel.group.value
        relations.append(item)
    return {
        "objects": [
            {"id": obj.id, "label": obj.label, "bbox": list(obj.box.rounded())}
            for obj in g.objects
        ],
        "relations": relations,
    }


def serialize_json(g: SceneGraph) -> str:
    """
    Serialize a structurally valid graph to canonical compact JSON.

    Raises:
        SerializationError: If the graph fails structural validation.
    """
    report = validate_graph(g)
    if not report.is_valid:
        codes = ", ".join(sorted({v.code.value for v in report.violations}))
        raise SerializationError(f"Cannot serialize an invalid {g.schema.value} graph ({codes})")
    return json.dumps(graph_to_dict(g), separators=(",", ":"), ensure_ascii=False)


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def graph_from_dict(
    raw: Any,
    schema: Schema = Schema.OBJECT_RELATION,
) -> tuple[Optional[SceneGraph], list[Diagnostic]]:
    """
    Build a best-effort graph from a decoded JSON value.

    Entries that cannot be read are skipped with a diagnostic. The returned
    graph is None only when the top level is not an object.
    """
    diagnostics: list[Diagnostic] = []

    def bad(message: str) -> None:
        diagnostics.append(Diagnostic(DiagnosticCode.BAD_ROW, message))

    if not isinstance(raw, dict):
        return None, [Diagnostic(DiagnosticCode.BAD_JSON, "Top-level value must be an object")]

    objects_raw = raw.get("objects")
    relations_raw = raw.get("relations")
    if not isinstance(objects_raw, list):
        bad("'objects' must be a list")
        objects_raw = []
    if not isinstance(relations_raw, list):
        bad("'relations' must be a list")
        relations_raw = []

    objects: list[SceneObject] = []
    for i, item in enumerate(objects_raw):
        if not isinstance(item, dict):
            bad(f"objects[{i}] is not an object")
            continue
        obj_id, label, bbox = item.get("id"), item.get("label"), item.get("bbox")
        if not _is_int(obj_id) or not isinstance(label, str):
            bad(f"objects[{i}] needs an integer 'id' and a string 'label'")
            continue
        if not isinstance(bbox, list) or len(bbox) != 4 or not all(_is_number(c) for c in bbox):
            bad(f"objects[{i}] 'bbox' must be four numbers")
            continue
        objects.append(SceneObject(id=obj_id, label=label, box=BoundingBox(*(float(c) for c in bbox))))

    relations: list[Relation] = []
    for i, item in enumerate(relations_raw):
        if not isinstance(item, dict):
            bad(f"relations[{i}] is not an object")
            continue
        subject, predicate, target = item.get("subject"), item.get("predicate"), item.get("object")
        if not _is_int(subject) or not _is_int(target) or not isinstance(predicate, str):
            bad(f"relations[{i}] needs integer 'subject'/'object' and a string 'predicate'")
            continue
        group: Optional[RelationGroup] = None
        if item.get("group") is not None:
            try:
                group = RelationGroup(item["group"])
            except ValueError:
                bad(f"relations[{i}] has unknown group {item['group']!r}")
                continue
        relations.append(Relation(subject, predicate, target, group))

    return SceneGraph(schema=schema, objects=tuple(objects), relations=tuple(relations)), diagnostics


def outcome_from_dict(raw: Any, schema: Schema = Schema.OBJECT_RELATION) -> ParseOutcome:
    """Build a ParseOutcome (with validity mask) from a decoded JSON value."""
    graph, diagnostics = graph_from_dict(raw, schema)
    if graph is not None:
        for v in validate_graph(graph).violations:
            code = DiagnosticCode.DANGLING_REFERENCE if v.code is ViolationCode.DANGLING_REFERENCE else DiagnosticCode.INVALID_GRAPH
            diagnostics.append(Diagnostic(code, f"{v.code.value}: {v.message}"))
    return ParseOutcome(graph=graph, valid=0 if diagnostics or graph is None else 1, diagnostics=tuple(diagnostics))


def parse_json(text: str, schema: Schema = Schema.OBJECT_RELATION) -> ParseOutcome:
    """Parse canonical JSON (any key order). Never raises."""
    try:
        raw = json.loads(text)
    except (ValueError, RecursionError) as e:
        line = getattr(e, "lineno", 0)
        column = getattr(e, "colno", 0)
        logger.debug("JSON graph parse failed: %s", e)
        return ParseOutcome.failure(Diagnostic(DiagnosticCode.BAD_JSON, str(e), line, column))
    return outcome_from_dict(raw, schema)
