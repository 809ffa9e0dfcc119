"""
BaseAnnot frame thinning for video splits.

The first frame of each video is always kept; frame t is kept when its set of
object categories or its relation count differs from frame t-1 (the previous
input frame). Records without a video id are single images and always kept.
"""

import logging
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Any, Hashable, Optional, Sequence

from src.dataset.records import Record

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ThinningReport:
    videos: int
    frames_before: int
    frames_after: int
    retained_pct: float
    object_categories_before: int
    object_categories_after: int
    predicates_before: int
    predicates_after: int

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _signature(rec: Record, multiset: bool) -> tuple[Hashable, int]:
    labels = [o.label for o in rec.graph.objects]
    categories: Hashable = frozenset(Counter(labels).items()) if multiset else frozenset(labels)
    return categories, len(rec.graph.relations)


def _check_order(records: Sequence[Record]) -> None:
    """Frames of one video must be contiguous and index-ordered."""
    finished: set[str] = set()
    current: Optional[str] = None
    last_index: Optional[int] = None
    for rec in records:
        if rec.video_id != current:
            if current is not None:
                finished.add(current)
            if rec.video_id is not None and rec.video_id in finished:
                raise ValueError(f"Frames of video {rec.video_id!r} are not contiguous")
            current, last_index = rec.video_id, None
        if rec.video_id is not None and rec.frame_index is not None:
            if last_index is not None and rec.frame_index <= last_index:
                raise ValueError(f"Frames of video {rec.video_id!r} are not in index order")
            last_index = rec.frame_index


def _vocab(records: Sequence[Record]) -> tuple[int, int]:
    labels = {o.label for r in records for o in r.graph.objects}
    predicates = {rel.key for r in records for rel in r.graph.relations}
    return len(labels), len(predicates)


def thin_base_annot(records: Sequence[Record], multiset: bool = False) -> tuple[list[Record], ThinningReport]:
    """
    Keep frames whose annotation changes.

    Args:
        records: Records grouped by video and index-ordered within a video.
        multiset: Compare category multisets (with counts) instead of sets.

    Returns:
        (kept records, a subsequence of the input; report with frame counts
        and category/predicate vocabulary coverage before and after)

    Raises:
        ValueError: if frames of a video are not contiguous or not ordered.
    """
    _check_order(records)
    kept: list[Record] = []
    previous: Optional[Record] = None
    for rec in records:
        if rec.video_id is None or previous is None or previous.video_id != rec.video_id:
            kept.append(rec)
        elif _signature(rec, multiset) != _signature(previous, multiset):
            kept.append(rec)
        previous = rec

    obj_before, pred_before = _vocab(records)
    obj_after, pred_after = _vocab(kept)
    report = ThinningReport(
        videos=len({r.video_id for r in records if r.video_id is not None}),
        frames_before=len(records),
        frames_after=len(kept),
        retained_pct=100.0 * len(kept) / len(records) if records else 0.0,
        object_categories_before=obj_before,
        object_categories_after=obj_after,
        predicates_before=pred_before,
        predicates_after=pred_after,
    )
    logger.info(
        "BaseAnnot thinning: %d -> %d frame(s) (%.1f%%) over %d video(s)",
        report.frames_before, report.frames_after, report.retained_pct, report.videos,
    )
    return kept, report
