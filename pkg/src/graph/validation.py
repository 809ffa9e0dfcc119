"""
Structural validation of scene graphs.

validate_graph never raises: every violated invariant becomes a Violation in
the returned report, and an empty report means the graph is structurally
valid. Serializers refuse invalid graphs; parsers use the report to set the
validity mask.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from src.graph.model import HUMAN_LABEL, Schema, SceneGraph
from src.graph.vocabulary import Vocabulary

logger = logging.getLogger(__name__)

# Characters that would break the TOON row grammar
_FORBIDDEN_CHARS = (",", "\n", "\r", "\t")
# Extra restrictions for grouped (human-object) predicates
_GROUP_VALUE_SEPARATOR = "|"
_EMPTY_GROUP = "-"


class ViolationCode(Enum):
    NEGATIVE_ID = "negative-id"
    DUPLICATE_ID = "duplicate-id"
    EMPTY_LABEL = "empty-label"
    INVALID_TOKEN = "invalid-token"
    NON_FINITE_BOX = "non-finite-box"
    DEGENERATE_BOX = "degenerate-box"
    DANGLING_REFERENCE = "dangling-reference"
    SELF_RELATION = "self-relation"
    DUPLICATE_RELATION = "duplicate-relation"
    MISSING_GROUP = "missing-group"
    UNEXPECTED_GROUP = "unexpected-group"
    HUMAN_SUBJECT = "human-subject"
    PERSON_NOT_FIRST = "person-not-first"
    UNKNOWN_LABEL = "unknown-label"
    UNKNOWN_PREDICATE = "unknown-predicate"


@dataclass(frozen=True)
class Violation:
    """One violated invariant."""
    code: ViolationCode
    message: str
    object_id: Optional[int] = None
    relation_index: Optional[int] = None


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def is_valid(self) -> bool:
        return not self.violations

    @property
    def codes(self) -> set[ViolationCode]:
        return {v.code for v in self.violations}

    def __len__(self) -> int:
        return len(self.violations)


def _bad_token(text: str) -> bool:
    return text != text.strip() or any(ch in text for ch in _FORBIDDEN_CHARS)


def validate_graph(
    g: SceneGraph,
    vocab: Optional[Vocabulary] = None,
    closed: bool = False,
) -> ValidationReport:
    """
    Check every structural invariant of a graph.

    Args:
        g: The graph to check.
        vocab: Optional dataset vocabulary.
        closed: When True (and vocab is given), out-of-vocabulary labels and
                predicates are violations.

    Returns:
        A ValidationReport; empty iff the graph is structurally valid.
    """
    found: list[Violation] = []
    grouped = g.schema is Schema.HUMAN_OBJECT
    check_vocab = closed and vocab is not None

    id_counts = Counter(o.id for o in g.objects)
    for obj in g.objects:
        if obj.id < 0:
            found.append(Violation(ViolationCode.NEGATIVE_ID, f"Object id {obj.id} is negative", object_id=obj.id))
        if not obj.label:
            found.append(Violation(ViolationCode.EMPTY_LABEL, f"Object {obj.id} has an empty label", object_id=obj.id))
        elif _bad_token(obj.label):
            found.append(Violation(
                ViolationCode.INVALID_TOKEN,
                f"Object {obj.id} label {obj.label!r} contains a delimiter or surrounding whitespace",
                object_id=obj.id,
            ))
        elif check_vocab and vocab is not None and not vocab.allows_label(obj.label):
            found.append(Violation(
                ViolationCode.UNKNOWN_LABEL, f"Object {obj.id} label {obj.label!r} is not in the vocabulary",
                object_id=obj.id,
            ))
        coords = obj.box.as_tuple()
        if not all(math.isfinite(c) for c in coords):
            found.append(Violation(ViolationCode.NON_FINITE_BOX, f"Object {obj.id} box has non-finite coordinates", object_id=obj.id))
        elif obj.box.x1 > obj.box.x2 or obj.box.y1 > obj.box.y2:
            found.append(Violation(
                ViolationCode.DEGENERATE_BOX, f"Object {obj.id} box {coords} has x1 > x2 or y1 > y2",
                object_id=obj.id,
            ))

    for obj_id, count in sorted(id_counts.items()):
        if count > 1:
            found.append(Violation(ViolationCode.DUPLICATE_ID, f"Object id {obj_id} appears {count} times", object_id=obj_id))

    if grouped and g.objects:
        labels = [o.label for o in g.objects]
        if HUMAN_LABEL in labels and labels[0] != HUMAN_LABEL:
            found.append(Violation(
                ViolationCode.PERSON_NOT_FIRST,
                f"A '{HUMAN_LABEL}' object exists but the first object is {labels[0]!r}",
            ))
    human_id = g.objects[0].id if g.objects else None

    seen_triples: set[tuple[int, str, int]] = set()
    for idx, rel in enumerate(g.relations):
        where = f"Relation {idx} ({rel.subject_id}, {rel.key}, {rel.object_id})"
        if rel.subject_id not in id_counts or rel.object_id not in id_counts:
            found.append(Violation(ViolationCode.DANGLING_REFERENCE, f"{where} references an undeclared object", relation_index=idx))
        if rel.subject_id == rel.object_id:
            found.append(Violation(ViolationCode.SELF_RELATION, f"{where} relates an object to itself", relation_index=idx))
        if rel.triple in seen_triples:
            found.append(Violation(ViolationCode.DUPLICATE_RELATION, f"{where} duplicates an earlier relation", relation_index=idx))
        seen_triples.add(rel.triple)

        if not rel.predicate:
            found.append(Violation(ViolationCode.EMPTY_LABEL, f"{where} has an empty predicate", relation_index=idx))
        elif _bad_token(rel.predicate) or (
            grouped and (_GROUP_VALUE_SEPARATOR in rel.predicate or rel.predicate == _EMPTY_GROUP)
        ):
            found.append(Violation(ViolationCode.INVALID_TOKEN, f"{where} predicate contains a delimiter", relation_index=idx))
        elif check_vocab and vocab is not None and not vocab.allows_predicate(rel):
            found.append(Violation(ViolationCode.UNKNOWN_PREDICATE, f"{where} predicate is not in the vocabulary", relation_index=idx))

        if grouped:
            if rel.group is None:
                found.append(Violation(ViolationCode.MISSING_GROUP, f"{where} has no relation group", relation_index=idx))
            if rel.subject_id != human_id:
                found.append(Violation(ViolationCode.HUMAN_SUBJECT, f"{where} subject is not the human", relation_index=idx))
        elif rel.group is not None:
            found.append(Violation(ViolationCode.UNEXPECTED_GROUP, f"{where} carries a group outside the human-object schema", relation_index=idx))

    if found:
        logger.debug("Graph has %d violation(s): %s", len(found), sorted({v.code.value for v in found}))
    return ValidationReport(tuple(found))
