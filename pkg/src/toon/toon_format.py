"""
TOON serialization of scene graphs.

Objects are rows under one shared header, relations are a compact
schema-specific block. The grammar is documented in docs/toon-grammar.md:

    objects[N]{id,label,x1,y1,x2,y2}:
    0,zebra,12,40,300,400
    ...
    relations[M]{subject,predicate,object}:
    0,eating,2
    ...

The human-object schema replaces the relation block with one row per
(human, object) pair, where each group holds |-separated values or "-":

    relations[M]{object,attention,spatial,contacting}:
    1,looking_at,in_front_of,holding|touching

The parser never raises; every problem becomes a Diagnostic and clears the
validity mask.
"""

import logging
import re
from dataclasses import dataclass
from typing import Optional

from src.errors import SerializationError
from src.graph.model import (
    GROUP_ORDER,
    BoundingBox,
    Relation,
    RelationGroup,
    Schema,
    SceneGraph,
    SceneObject,
)
from src.graph.validation import ValidationReport, ViolationCode, validate_graph
from src.toon.outcome import Diagnostic, DiagnosticCode, ParseOutcome, ToonDocument

logger = logging.getLogger(__name__)

OBJECT_FIELDS: tuple[str, ...] = ("id", "label", "x1", "y1", "x2", "y2")
RELATION_FIELDS: dict[Schema, tuple[str, ...]] = {
    Schema.OBJECT_RELATION: ("subject", "predicate", "object"),
    Schema.HUMAN_OBJECT: ("object",) + tuple(g.value for g in GROUP_ORDER),
}

FIELD_SEPARATOR = ","
VALUE_SEPARATOR = "|"
EMPTY_GROUP = "-"

_HEADER_RE = re.compile(r"^(?P<name>[A-Za-z_]+)\[(?P<count>\d{1,9})\]\{(?P<fields>[^{}]*)\}:$")
_HEADER_START_RE = re.compile(r"^[A-Za-z_]+\s*\[")
_INT_RE = re.compile(r"^[+-]?\d{1,18}$")
_REAL_RE = re.compile(r"^[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d{1,4})?$")


def _header(name: str, count: int, fields: tuple[str, ...]) -> str:
    return f"{name}[{count}]{{{FIELD_SEPARATOR.join(fields)}}}:"


def _grouped_rows(relations: tuple[Relation, ...]) -> list[tuple[int, dict[RelationGroup, list[str]]]]:
    rows: dict[int, dict[RelationGroup, list[str]]] = {}
    for rel in relations:
        if rel.group is None:
            continue
        rows.setdefault(rel.object_id, {g: [] for g in GROUP_ORDER})[rel.group].append(rel.predicate)
    return list(rows.items())


def _refuse(g: SceneGraph, report: ValidationReport) -> SerializationError:
    codes = ", ".join(sorted({v.code.value for v in report.violations}))
    return SerializationError(f"Cannot serialize an invalid {g.schema.value} graph ({codes})")


def serialize_toon(g: SceneGraph) -> ToonDocument:
    """
    Serialize a structurally valid graph to canonical TOON text.

    Output is deterministic, uses LF line endings, has no tabs, no padding
    around fields and a single trailing newline. Coordinates are written as
    integers rounded half away from zero.

    Raises:
        SerializationError: If the graph fails structural validation.
    """
    report = validate_graph(g)
    if not report.is_valid:
        raise _refuse(g, report)

    lines = [_header("objects", len(g.objects), OBJECT_FIELDS)]
    for obj in g.objects:
        x1, y1, x2, y2 = obj.box.rounded()
        lines.append(FIELD_SEPARATOR.join((str(obj.id), obj.label, str(x1), str(y1), str(x2), str(y2))))

    fields = RELATION_FIELDS[g.schema]
    if g.schema is Schema.HUMAN_OBJECT:
        rows = _grouped_rows(g.relations)
        lines.append(_header("relations", len(rows), fields))
        for object_id, groups in rows:
            cells = [VALUE_SEPARATOR.join(groups[grp]) or EMPTY_GROUP for grp in GROUP_ORDER]
            lines.append(FIELD_SEPARATOR.join([str(object_id)] + cells))
    else:
        lines.append(_header("relations", len(g.relations), fields))
        for rel in g.relations:
            lines.append(FIELD_SEPARATOR.join((str(rel.subject_id), rel.predicate, str(rel.object_id))))

    return ToonDocument(raw_text="\n".join(lines) + "\n", schema=g.schema)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Line:
    number: int      # 1-based
    indent: int      # leading characters stripped
    text: str        # stripped content
    is_last: bool    # last non-blank line of the document


@dataclass(frozen=True)
class _Field:
    value: str
    column: int      # 1-based column of the field start


class _ToonReader:
    """Line cursor that collects diagnostics instead of raising."""

    def __init__(self, text: str, schema: Schema):
        self.schema = schema
        self.diagnostics: list[Diagnostic] = []
        self.truncated = not text.endswith("\n")
        raw_lines = [ln[:-1] if ln.endswith("\r") else ln for ln in text.split("\n")]
        numbered = [(i + 1, ln) for i, ln in enumerate(raw_lines) if ln.strip()]
        self._lines = [
            _Line(
                number=num,
                indent=len(raw) - len(raw.lstrip()),
                text=raw.strip(),
                is_last=(k == len(numbered) - 1),
            )
            for k, (num, raw) in enumerate(numbered)
        ]
        self._pos = 0
        self.object_lines: dict[int, int] = {}
        self.relation_lines: dict[Relation, int] = {}

    def next(self) -> Optional[_Line]:
        if self._pos >= len(self._lines):
            return None
        line = self._lines[self._pos]
        self._pos += 1
        return line

    def error(self, code: DiagnosticCode, message: str, line: int = 0, column: int = 0) -> None:
        self.diagnostics.append(Diagnostic(code, message, line, column))

    def row_error(self, line: _Line, message: str, column: int = 1) -> None:
        # A malformed final row of a document without a closing newline was cut off
        if line.is_last and self.truncated:
            self.error(DiagnosticCode.UNEXPECTED_END, f"Document ends mid-row: {message}", line.number, column)
        else:
            self.error(DiagnosticCode.BAD_ROW, message, line.number, column)

    # -- fields -------------------------------------------------------------

    @staticmethod
    def split(line: _Line) -> list[_Field]:
        fields = []
        offset = 0
        for part in line.text.split(FIELD_SEPARATOR):
            lead = len(part) - len(part.lstrip())
            fields.append(_Field(part.strip(), line.indent + offset + lead + 1))
            offset += len(part) + 1
        return fields

    def integer(self, line: _Line, f: _Field, what: str) -> Optional[int]:
        if not _INT_RE.match(f.value):
            self.error(DiagnosticCode.BAD_NUMBER, f"Expected an integer {what}, got {f.value!r}", line.number, f.column)
            return None
        return int(f.value)

    def real(self, line: _Line, f: _Field, what: str) -> Optional[float]:
        if not _REAL_RE.match(f.value):
            self.error(DiagnosticCode.BAD_NUMBER, f"Expected a number for {what}, got {f.value!r}", line.number, f.column)
            return None
        return float(f.value)

    def header(self, line: _Line, name: str, fields: tuple[str, ...]) -> Optional[int]:
        compact = re.sub(r"\s+", "", line.text)
        m = _HEADER_RE.match(compact)
        expected = _header(name, 0, fields).replace("[0]", "[N]")
        if not m or m.group("name") != name or tuple(m.group("fields").split(FIELD_SEPARATOR)) != fields:
            self.error(
                DiagnosticCode.BAD_HEADER,
                f"Expected header {expected} for the {self.schema.value} schema, got {line.text!r}",
                line.number, line.indent + 1,
            )
            return None
        return int(m.group("count"))

    # -- rows ---------------------------------------------------------------

    def object_row(self, line: _Line) -> Optional[SceneObject]:
        fields = self.split(line)
        if len(fields) != len(OBJECT_FIELDS):
            self.row_error(line, f"Object row needs {len(OBJECT_FIELDS)} fields, found {len(fields)}")
            return None
        obj_id = self.integer(line, fields[0], "object id")
        coords = [self.real(line, f, name) for f, name in zip(fields[2:], OBJECT_FIELDS[2:])]
        if obj_id is None or any(c is None for c in coords):
            return None
        x1, y1, x2, y2 = (float(c) for c in coords)  # type: ignore[arg-type]
        obj = SceneObject(id=obj_id, label=fields[1].value, box=BoundingBox(x1, y1, x2, y2))
        self.object_lines.setdefault(obj_id, line.number)
        return obj

    def relation_rows(self, line: _Line, human_id: int) -> Optional[list[Relation]]:
        fields = self.split(line)
        expected = RELATION_FIELDS[self.schema]
        if len(fields) != len(expected):
            self.row_error(line, f"Relation row needs {len(expected)} fields, found {len(fields)}")
            return None

        if self.schema is Schema.OBJECT_RELATION:
            subject = self.integer(line, fields[0], "subject")
            target = self.integer(line, fields[2], "object")
            if subject is None or target is None:
                return None
            rels = [Relation(subject, fields[1].value, target)]
        else:
            target = self.integer(line, fields[0], "object")
            if target is None:
                return None
            rels = []
            for grp, cell in zip(GROUP_ORDER, fields[1:]):
                if cell.value == EMPTY_GROUP:
                    continue
                values = [v.strip() for v in cell.value.split(VALUE_SEPARATOR)]
                if not all(values):
                    self.row_error(line, f"Empty value in {grp.value} group {cell.value!r}", cell.column)
                    return None
                rels.extend(Relation(human_id, v, target, grp) for v in values)

        for rel in rels:
            self.relation_lines.setdefault(rel, line.number)
        return rels


def _violation_diagnostics(reader: _ToonReader, graph: SceneGraph) -> list[Diagnostic]:
    diagnostics = []
    for v in validate_graph(graph).violations:
        line = 0
        if v.relation_index is not None:
            line = reader.relation_lines.get(graph.relations[v.relation_index], 0)
        elif v.object_id is not None:
            line = reader.object_lines.get(v.object_id, 0)
        code = (
            DiagnosticCode.DANGLING_REFERENCE
            if v.code is ViolationCode.DANGLING_REFERENCE
            else DiagnosticCode.INVALID_GRAPH
        )
        diagnostics.append(Diagnostic(code, f"{v.code.value}: {v.message}", line, 1))
    return diagnostics


def parse_toon(text: str, schema: Schema = Schema.OBJECT_RELATION) -> ParseOutcome:
    """
    Parse TOON text into a graph.

    Returns valid=1 with the graph on well-formed input. On anything else it
    returns valid=0, a best-effort graph built from the readable rows (None
    when even the object header is unreadable) and the diagnostics.
    """
    reader = _ToonReader(text, schema)

    first = reader.next()
    if first is None:
        return ParseOutcome.failure(Diagnostic(DiagnosticCode.UNEXPECTED_END, "Document is empty", 1, 1))
    declared_objects = reader.header(first, "objects", OBJECT_FIELDS)
    if declared_objects is None:
        return ParseOutcome(graph=None, valid=0, diagnostics=tuple(reader.diagnostics))

    objects: list[SceneObject] = []
    object_rows = 0
    relation_header: Optional[_Line] = None
    while True:
        line = reader.next()
        if line is None:
            reader.error(DiagnosticCode.UNEXPECTED_END, "Document ended before the relations header")
            break
        if _HEADER_START_RE.match(line.text):
            relation_header = line
            break
        object_rows += 1
        obj = reader.object_row(line)
        if obj is not None:
            objects.append(obj)
    if object_rows != declared_objects:
        reader.error(
            DiagnosticCode.COUNT_MISMATCH,
            f"Header declares {declared_objects} object row(s), found {object_rows}",
            first.number, first.indent + 1,
        )

    relations: list[Relation] = []
    if relation_header is not None:
        fields = RELATION_FIELDS[schema]
        declared_relations = reader.header(relation_header, "relations", fields)
        if declared_relations is not None:
            human_id = min((o.id for o in objects), default=0)
            relation_rows = 0
            while True:
                line = reader.next()
                if line is None:
                    break
                if _HEADER_START_RE.match(line.text):
                    reader.error(DiagnosticCode.TRAILING_CONTENT, f"Unexpected content {line.text!r}", line.number, line.indent + 1)
                    break
                relation_rows += 1
                rels = reader.relation_rows(line, human_id)
                if rels is not None:
                    relations.extend(rels)
            if relation_rows != declared_relations:
                code = DiagnosticCode.COUNT_MISMATCH
                if relation_rows < declared_relations and reader.truncated:
                    code = DiagnosticCode.UNEXPECTED_END
                reader.error(
                    code,
                    f"Header declares {declared_relations} relation row(s), found {relation_rows}",
                    relation_header.number, relation_header.indent + 1,
                )

    graph = SceneGraph(schema=schema, objects=tuple(objects), relations=tuple(relations))
    diagnostics = reader.diagnostics + _violation_diagnostics(reader, graph)
    if diagnostics:
        logger.debug("TOON parse failed with %d diagnostic(s); first: %s", len(diagnostics), diagnostics[0])
    return ParseOutcome(graph=graph, valid=0 if diagnostics else 1, diagnostics=tuple(diagnostics))
