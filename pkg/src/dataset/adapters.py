"""
Adapters from dataset-native annotations to canonical records.

Core code only ever sees canonical records; everything dataset-specific is
kept here. All boxes are rescaled from the source resolution to the
640x480 frame and written as (x1, y1, x2, y2).

PSG (one panoptic scene graph document):
    thing_classes + stuff_classes   category names, indexed by category_id
    predicate_classes               predicate names
    data[i].image_id                -> record id
    data[i].width, data[i].height   source resolution
    data[i].annotations[k].bbox     xyxy, object id k
    data[i].relations               [subject k, object k, predicate index]

PVSG-style (one video; boxes derived from masks upstream):
    video_id, meta.width, meta.height
    objects[].object_id, objects[].category
    boxes[frame][object_id]         xyxy for objects visible in that frame
    relations                       [subject, object, predicate, [[start, end], ...]]
                                    active on frames start..end inclusive

Action Genome (object_bbox_and_relationship + person_bbox, already loaded):
    frame key "<video>.mp4/<frame>.png" -> record id; the number -> frame index
    person_bbox[key].bbox           N x 4 xyxy (first row is the human)
    person_bbox[key].bbox_size      (width, height) of the source frame
    objects[].class, objects[].bbox xywh, objects[].visible
    objects[].{attention,spatial,contacting}_relationship   predicate lists
"""

import json
import logging
import re
from enum import Enum
from typing import Any, Iterable, Iterator, Mapping, Optional, Sequence

from src.dataset.records import Record
from src.errors import AnnotationError
from src.graph.model import (
    HUMAN_LABEL,
    IMAGE_HEIGHT,
    IMAGE_WIDTH,
    BoundingBox,
    Relation,
    RelationGroup,
    Schema,
    SceneGraph,
    SceneObject,
)

logger = logging.getLogger(__name__)


def rescale_box(xyxy: Sequence[float], width: float, height: float) -> BoundingBox:
    """Map an xyxy box from a width x height frame to the 640x480 frame."""
    if width <= 0 or height <= 0:
        raise AnnotationError(f"Invalid source resolution {width}x{height}")
    sx, sy = IMAGE_WIDTH / width, IMAGE_HEIGHT / height
    x1, y1, x2, y2 = (float(v) for v in xyxy)
    return BoundingBox(x1 * sx, y1 * sy, x2 * sx, y2 * sy)


def xywh_to_xyxy(box: Sequence[float]) -> tuple[float, float, float, float]:
    x, y, w, h = (float(v) for v in box)
    return (x, y, x + w, y + h)


# ---------------------------------------------------------------------------
# PSG
# ---------------------------------------------------------------------------

def psg_records(document: Mapping[str, Any]) -> Iterator[Record]:
    categories = list(document.get("thing_classes", [])) + list(document.get("stuff_classes", []))
    predicates = list(document.get("predicate_classes", []))
    for item in document.get("data", []):
        sample_id = str(item.get("image_id", item.get("file_name", "")))
        try:
            width, height = item["width"], item["height"]
            objects = tuple(
                SceneObject(k, categories[ann["category_id"]], rescale_box(ann["bbox"], width, height))
                for k, ann in enumerate(item.get("annotations", []))
            )
            relations = tuple(Relation(int(s), predicates[p], int(o)) for s, o, p in item.get("relations", []))
        except (KeyError, IndexError, TypeError, ValueError) as e:
            raise AnnotationError(f"PSG record {sample_id}: {e}") from None
        yield Record(sample_id, SceneGraph(Schema.OBJECT_RELATION, objects, relations, frame_id=sample_id))


# ---------------------------------------------------------------------------
# PVSG-style
# ---------------------------------------------------------------------------

def _active(spans: Iterable[Sequence[int]], frame: int) -> bool:
    return any(start <= frame <= end for start, end in spans)


def pvsg_records(video: Mapping[str, Any]) -> Iterator[Record]:
    video_id = str(video.get("video_id", ""))
    try:
        width, height = video["meta"]["width"], video["meta"]["height"]
        categories = {int(o["object_id"]): str(o["category"]) for o in video.get("objects", [])}
        boxes: Mapping[Any, Mapping[Any, Sequence[float]]] = video.get("boxes", {})
        frames = sorted(int(f) for f in boxes)
        for frame in frames:
            visible = {int(k): v for k, v in (boxes.get(frame) or boxes.get(str(frame)) or {}).items()}
            objects = tuple(
                SceneObject(oid, categories[oid], rescale_box(box, width, height))
                for oid, box in sorted(visible.items())
            )
            relations = tuple(
                Relation(int(s), str(p), int(o))
                for s, o, p, spans in video.get("relations", [])
                if int(s) in visible and int(o) in visible and _active(spans, frame)
            )
            sample_id = f"{video_id}/{frame:04d}"
            graph = SceneGraph(Schema.OBJECT_RELATION, objects, relations, frame_id=sample_id)
            yield Record(sample_id, graph, video_id, frame)
    except (KeyError, TypeError, ValueError) as e:
        raise AnnotationError(f"PVSG video {video_id}: {e}") from None


# ---------------------------------------------------------------------------
# Action Genome
# ---------------------------------------------------------------------------

_AG_GROUPS = (
    ("attention_relationship", RelationGroup.ATTENTION),
    ("spatial_relationship", RelationGroup.SPATIAL),
    ("contacting_relationship", RelationGroup.CONTACTING),
)
_FRAME_NUMBER_RE = re.compile(r"(\d+)\.\w+$")


def _ag_frame(key: str) -> tuple[str, Optional[int]]:
    video, _, frame = key.partition("/")
    match = _FRAME_NUMBER_RE.search(frame)
    return video, int(match.group(1)) if match else None


def ag_record(key: str, objects_raw: Sequence[Mapping[str, Any]], person: Mapping[str, Any]) -> Optional[Record]:
    """One Action Genome frame as a human-object record; None when no human is boxed."""
    person_boxes = person.get("bbox")
    if person_boxes is None or len(person_boxes) == 0:
        logger.debug("Skipping %s: no person box", key)
        return None
    width, height = person["bbox_size"]
    objects = [SceneObject(0, HUMAN_LABEL, rescale_box(person_boxes[0], width, height))]
    relations: list[Relation] = []
    for item in objects_raw:
        if not item.get("visible", True) or item.get("bbox") is None:
            continue
        oid = len(objects)
        label = str(item["class"]).replace("/", "_")
        objects.append(SceneObject(oid, label, rescale_box(xywh_to_xyxy(item["bbox"]), width, height)))
        for field_name, group in _AG_GROUPS:
            for predicate in item.get(field_name) or ():
                relations.append(Relation(0, str(predicate), oid, group))
    video_id, frame_index = _ag_frame(key)
    graph = SceneGraph(Schema.HUMAN_OBJECT, tuple(objects), tuple(relations), frame_id=key)
    return Record(key, graph, video_id, frame_index)


def ag_records(
    object_relationships: Mapping[str, Sequence[Mapping[str, Any]]],
    person_boxes: Mapping[str, Mapping[str, Any]],
) -> Iterator[Record]:
    """Action Genome frames in (video, frame) order; frames without a human are skipped."""
    skipped = 0
    for key in sorted(object_relationships, key=_ag_frame_sort_key):
        try:
            rec = ag_record(key, object_relationships[key], person_boxes.get(key, {}))
        except (KeyError, IndexError, TypeError, ValueError) as e:
            raise AnnotationError(f"Action Genome frame {key}: {e}") from None
        if rec is None:
            skipped += 1
            continue
        yield rec
    if skipped:
        logger.info("Skipped %d Action Genome frame(s) without a person box", skipped)


def _ag_frame_sort_key(key: str) -> tuple[str, int]:
    video, frame = _ag_frame(key)
    return video, -1 if frame is None else frame


# ---------------------------------------------------------------------------
# Files
# ---------------------------------------------------------------------------

class NativeSource(Enum):
    PSG = "psg"
    PVSG = "pvsg"
    AG = "ag"


def _read_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        try:
            return json.load(f)
        except ValueError as e:
            raise AnnotationError(f"Not valid JSON: {e}", path) from None


def _pvsg_videos(raw: Any, path: str) -> list[Mapping[str, Any]]:
    if isinstance(raw, dict) and isinstance(raw.get("data"), list):
        raw = raw["data"]
    if isinstance(raw, dict):
        return [raw]
    if isinstance(raw, list) and all(isinstance(v, dict) for v in raw):
        return raw
    raise AnnotationError("Expected a video object, a list of videos or {\"data\": [...]}", path)


def load_native_records(
    source: NativeSource,
    path: str,
    person_boxes_path: Optional[str] = None,
) -> Iterator[Record]:
    """
    Records from a dataset-native JSON file.

    Action Genome needs the person-box file as well; both of its files must
    already be converted from pickle to JSON.

    Raises:
        AnnotationError: on unreadable files or records.
        ValueError: when an Action Genome import has no person-box file.
    """
    raw = _read_json(path)
    if source is NativeSource.PSG:
        if not isinstance(raw, dict):
            raise AnnotationError("PSG document must be a JSON object", path)
        yield from psg_records(raw)
    elif source is NativeSource.PVSG:
        for video in _pvsg_videos(raw, path):
            yield from pvsg_records(video)
    else:
        if person_boxes_path is None:
            raise ValueError("Action Genome import needs the person-box file")
        persons = _read_json(person_boxes_path)
        if not isinstance(raw, dict) or not isinstance(persons, dict):
            raise AnnotationError("Action Genome files must be JSON objects keyed by frame", path)
        yield from ag_records(raw, persons)
