"""
Annotation records and split I/O.

One record per line (JSONL), a JSON array of records, a single JSON record,
or a directory of such files (plus bare *.toon files, one graph each, keyed
by file stem). A record looks like

    {"id": "2410", "video_id": "0001_4164158586", "frame_index": 12,
     "objects": [...], "relations": [...]}

Instead of objects/relations a record may carry "toon" (TOON text) or, in
prediction files, "completion" (raw model output with an answer block).
The JSON layout is described in docs/annotation.schema.json.
"""

import json
import logging
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Iterable, Iterator, Optional

from src.errors import AnnotationError
from src.graph.model import Schema, SceneGraph
from src.toon.answer import extract_answer
from src.toon.json_format import graph_from_dict, graph_to_dict, outcome_from_dict
from src.toon.outcome import DiagnosticCode, ParseOutcome
from src.toon.toon_format import parse_toon, serialize_toon

logger = logging.getLogger(__name__)

RECORD_SUFFIXES = (".json", ".jsonl", ".toon")


@dataclass(frozen=True)
class Record:
    sample_id: str
    graph: SceneGraph
    video_id: Optional[str] = None
    frame_index: Optional[int] = None

    def with_graph(self, graph: SceneGraph) -> "Record":
        return replace(self, graph=graph)


@dataclass
class DatasetSplit:
    """Ordered records with unique sample ids."""
    name: str
    records: list[Record] = field(default_factory=list)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for rec in self.records:
            if rec.sample_id in seen:
                raise AnnotationError(f"Duplicate sample id {rec.sample_id!r} in split {self.name!r}")
            seen.add(rec.sample_id)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[Record]:
        return iter(self.records)

    def by_id(self) -> dict[str, Record]:
        return {r.sample_id: r for r in self.records}


def _sample_id(raw: dict[str, Any], fallback: str, path: str, line: Optional[int]) -> str:
    value = raw.get("id", fallback)
    if isinstance(value, bool) or not isinstance(value, (str, int)) or str(value) == "":
        raise AnnotationError("Record 'id' must be a non-empty string or integer", path, line)
    return str(value)


def _envelope(raw: dict[str, Any], path: str, line: Optional[int]) -> tuple[Optional[str], Optional[int]]:
    video_id, frame_index = raw.get("video_id"), raw.get("frame_index")
    if video_id is not None and not isinstance(video_id, (str, int)):
        raise AnnotationError("'video_id' must be a string", path, line)
    if frame_index is not None and (isinstance(frame_index, bool) or not isinstance(frame_index, int)):
        raise AnnotationError("'frame_index' must be an integer", path, line)
    return (None if video_id is None else str(video_id)), frame_index


def record_from_dict(
    raw: Any,
    schema: Schema = Schema.OBJECT_RELATION,
    path: str = "<memory>",
    line: Optional[int] = None,
    fallback_id: str = "",
    expect: Optional[str] = None,
) -> Record:
    """
    Build a ground-truth Record. The graph may still violate structural rules
    (duplicates, self-relations, dangling relations); clean_graph takes care
    of those, whichever format the record is written in. expect
    ("json" or "toon") rejects records written in the other format.

    Raises:
        AnnotationError: on unreadable records.
    """
    if not isinstance(raw, dict):
        raise AnnotationError("Record must be a JSON object", path, line)
    sample_id = _sample_id(raw, fallback_id, path, line)
    video_id, frame_index = _envelope(raw, path, line)
    if expect is not None and ("toon" in raw) != (expect == "toon"):
        raise AnnotationError(f"Record {sample_id} is not in {expect} format", path, line)

    if "toon" in raw:
        if not isinstance(raw["toon"], str):
            raise AnnotationError("'toon' must be a string", path, line)
        outcome = parse_toon(raw["toon"], schema)
        graph = outcome.graph
        blocking = [
            d for d in outcome.diagnostics
            if d.code not in (DiagnosticCode.INVALID_GRAPH, DiagnosticCode.DANGLING_REFERENCE)
        ]
        if graph is None or blocking:
            detail = "; ".join(str(d) for d in blocking) or "unreadable TOON"
            raise AnnotationError(f"Record {sample_id}: {detail}", path, line)
    else:
        graph, diagnostics = graph_from_dict(raw, schema)
        if graph is None or diagnostics:
            detail = "; ".join(d.message for d in diagnostics)
            raise AnnotationError(f"Record {sample_id}: {detail}", path, line)
    return Record(sample_id, replace(graph, frame_id=sample_id), video_id, frame_index)


def record_to_dict(record: Record, fmt: str = "json") -> dict[str, Any]:
    """Canonical dict form; fmt 'toon' stores the graph as TOON text."""
    data: dict[str, Any] = {"id": record.sample_id}
    if record.video_id is not None:
        data["video_id"] = record.video_id
    if record.frame_index is not None:
        data["frame_index"] = record.frame_index
    if fmt == "toon":
        data["toon"] = serialize_toon(record.graph).raw_text
    elif fmt == "json":
        data.update(graph_to_dict(record.graph))
    else:
        raise ValueError(f"Unknown record format {fmt!r}")
    return data


def record_line(record: Record, fmt: str = "json") -> str:
    """One compact JSONL line (without the newline)."""
    return json.dumps(record_to_dict(record, fmt), separators=(",", ":"), ensure_ascii=False)


def _iter_raw(path: Path) -> Iterator[tuple[Any, Optional[int], str]]:
    """Yield (decoded value, line number or None, fallback id) from one file."""
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise AnnotationError(f"Not UTF-8 text: {e}", str(path)) from None

    if path.suffix == ".toon":
        yield {"toon": text}, None, path.stem
        return

    stripped = text.lstrip()
    if path.suffix == ".json" and stripped.startswith(("[", "{")):
        try:
            value = json.loads(text)
        except ValueError:
            value = None
        if isinstance(value, list):
            for i, item in enumerate(value):
                yield item, None, f"{path.stem}-{i}"
            return
        if isinstance(value, dict):
            yield value, None, path.stem
            return

    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            yield json.loads(line), lineno, f"{path.stem}-{lineno}"
        except ValueError as e:
            raise AnnotationError(f"Invalid JSON: {e}", str(path), lineno) from None


def input_files(path: str) -> list[Path]:
    """The record files behind path: the file itself, or a sorted directory listing."""
    p = Path(path)
    if p.is_dir():
        return sorted(f for f in p.iterdir() if f.is_file() and f.suffix in RECORD_SUFFIXES)
    if not p.exists():
        raise FileNotFoundError(f"No such file or directory: {path}")
    return [p]


def iter_records(
    path: str,
    schema: Schema = Schema.OBJECT_RELATION,
    expect: Optional[str] = None,
) -> Iterator[Record]:
    """Stream ground-truth records from a file or directory."""
    for f in input_files(path):
        for raw, line, fallback in _iter_raw(f):
            yield record_from_dict(raw, schema, str(f), line, fallback, expect)


def load_split(path: str, schema: Schema = Schema.OBJECT_RELATION, name: Optional[str] = None) -> DatasetSplit:
    t0 = time.monotonic()
    split = DatasetSplit(name or Path(path).stem, list(iter_records(path, schema)))
    logger.info("Loaded %d record(s) from %s in %.1fms", len(split), path, (time.monotonic() - t0) * 1000)
    return split


def write_records(records: Iterable[Record], path: str, fmt: str = "json") -> int:
    """Write records as JSONL; returns the number written."""
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(record_line(rec, fmt))
            fh.write("\n")
            count += 1
    logger.info("Wrote %d record(s) to %s", count, path)
    return count


def write_split(split: DatasetSplit, path: str, fmt: str = "json") -> int:
    return write_records(split.records, path, fmt)


def prediction_from_dict(raw: Any, schema: Schema = Schema.OBJECT_RELATION) -> ParseOutcome:
    """
    A prediction record's graph as a ParseOutcome (never raises).

    Precedence: "completion" (answer extraction), then "toon", then inline
    objects/relations.
    """
    if not isinstance(raw, dict):
        return outcome_from_dict(raw, schema)
    if isinstance(raw.get("completion"), str):
        return extract_answer(raw["completion"], schema)
    if isinstance(raw.get("toon"), str):
        return parse_toon(raw["toon"], schema)
    return outcome_from_dict(raw, schema)


def load_predictions(path: str, schema: Schema = Schema.OBJECT_RELATION) -> dict[str, ParseOutcome]:
    """
    Predictions keyed by sample id. Unparseable graphs are kept as failed
    outcomes; only records without a usable id are errors.
    """
    out: dict[str, ParseOutcome] = {}
    for f in input_files(path):
        for raw, line, fallback in _iter_raw(f):
            if f.suffix == ".toon":
                out[fallback] = parse_toon(raw["toon"], schema)
                continue
            if not isinstance(raw, dict):
                raise AnnotationError("Prediction record must be a JSON object", str(f), line)
            sample_id = _sample_id(raw, fallback, str(f), line)
            if sample_id in out:
                logger.warning("Duplicate prediction for %s in %s; keeping the last one", sample_id, f)
            out[sample_id] = prediction_from_dict(raw, schema)
    logger.info(
        "Loaded %d prediction(s) from %s (%d invalid)",
        len(out), path, sum(1 for o in out.values() if not o.valid),
    )
    return out


def load_completions(path: str) -> dict[str, str]:
    """Raw completion strings keyed by sample id (for reward scoring)."""
    out: dict[str, str] = {}
    for f in input_files(path):
        for raw, line, fallback in _iter_raw(f):
            if not isinstance(raw, dict) or not isinstance(raw.get("completion"), str):
                raise AnnotationError("Completion record needs a string 'completion'", str(f), line)
            out[_sample_id(raw, fallback, str(f), line)] = raw["completion"]
    logger.info("Loaded %d completion(s) from %s", len(out), path)
    return out
