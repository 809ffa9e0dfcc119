"""
Serialization length statistics for TOON versus canonical JSON.

Built-in measures are characters, UTF-8 bytes and whitespace-separated
tokens. Tokenizer-based statistics are computed out of band and fed back
through a counts file mapping sample id to JSON and TOON token counts:

    {"2410": {"json": 412, "toon": 331}, ...}        (one JSON object), or
    {"id": "2410", "json": 412, "toon": 331}         (JSONL, one per line)
"""

import json
import logging
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Sequence

from src.dataset.records import Record
from src.errors import AnnotationError, SerializationError
from src.toon.json_format import serialize_json
from src.toon.toon_format import serialize_toon

logger = logging.getLogger(__name__)

STATISTICS = ("min", "mean", "median", "max")


class LengthMeasure(Enum):
    CHARS = "chars"
    BYTES = "bytes"
    WHITESPACE = "ws"
    FILE = "file"


@dataclass(frozen=True)
class LengthSummary:
    min: float
    mean: float
    median: float
    max: float

    @classmethod
    def of(cls, values: Sequence[float]) -> "LengthSummary":
        """Summary of a non-empty sample; the median of an even count is the lower-middle element."""
        if not values:
            raise ValueError("Cannot summarise an empty sample")
        ordered = sorted(values)
        return cls(
            min=ordered[0],
            mean=math.fsum(ordered) / len(ordered),
            median=ordered[(len(ordered) - 1) // 2],
            max=ordered[-1],
        )

    def get(self, name: str) -> float:
        return float(getattr(self, name))


@dataclass(frozen=True)
class LengthStats:
    measure: LengthMeasure
    count: int
    toon: LengthSummary
    json: LengthSummary
    skipped: int = 0

    @property
    def ratios(self) -> dict[str, float]:
        """JSON length / TOON length per statistic."""
        return {s: self.json.get(s) / self.toon.get(s) if self.toon.get(s) else math.inf for s in STATISTICS}

    @property
    def reduction_pct(self) -> dict[str, float]:
        """Signed change from JSON to TOON in percent (negative is shorter)."""
        return {
            s: 100.0 * (self.toon.get(s) - self.json.get(s)) / self.json.get(s) if self.json.get(s) else 0.0
            for s in STATISTICS
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            "measure": self.measure.value,
            "count": self.count,
            "skipped": self.skipped,
            "toon": {s: self.toon.get(s) for s in STATISTICS},
            "json": {s: self.json.get(s) for s in STATISTICS},
            "ratios": self.ratios,
            "reduction_pct": self.reduction_pct,
        }


def measure_text(text: str, measure: LengthMeasure) -> int:
    if measure is LengthMeasure.CHARS:
        return len(text)
    if measure is LengthMeasure.BYTES:
        return len(text.encode("utf-8"))
    if measure is LengthMeasure.WHITESPACE:
        return len(text.split())
    raise ValueError(f"{measure.value} lengths come from a counts file, not from text")


def load_token_counts(path: str) -> dict[str, tuple[int, int]]:
    """Read sample id -> (json tokens, toon tokens) from a counts file."""
    text = Path(path).read_text(encoding="utf-8")

    def pair(value: Any, line: Optional[int]) -> tuple[int, int]:
        if isinstance(value, dict) and isinstance(value.get("json"), int) and isinstance(value.get("toon"), int):
            return value["json"], value["toon"]
        if isinstance(value, list) and len(value) == 2 and all(isinstance(v, int) for v in value):
            return value[0], value[1]
        raise AnnotationError("Counts must be {'json': int, 'toon': int} or [json, toon]", path, line)

    counts: dict[str, tuple[int, int]] = {}
    try:
        whole = json.loads(text)
    except ValueError:
        whole = None
    if isinstance(whole, dict) and "id" not in whole:
        for key, value in whole.items():
            counts[str(key)] = pair(value, None)
        return counts

    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            item = json.loads(line)
        except ValueError as e:
            raise AnnotationError(f"Invalid JSON: {e}", path, lineno) from None
        if not isinstance(item, dict) or "id" not in item:
            raise AnnotationError("Counts line needs an 'id'", path, lineno)
        counts[str(item["id"])] = pair(item, lineno)
    return counts


def length_stats(
    records: Iterable[Record],
    measure: LengthMeasure = LengthMeasure.CHARS,
    counts: Optional[Mapping[str, tuple[int, int]]] = None,
) -> LengthStats:
    """
    Min/mean/median/max serialized length in both formats.

    Graphs that cannot be serialized (structurally invalid) are skipped and
    counted; with the file measure, records missing from counts are skipped.

    Raises:
        ValueError: if no record could be measured, or the file measure is
            requested without counts.
    """
    if measure is LengthMeasure.FILE and counts is None:
        raise ValueError("The file measure needs token counts")
    toon_lengths: list[float] = []
    json_lengths: list[float] = []
    skipped = 0
    for rec in records:
        if measure is LengthMeasure.FILE:
            assert counts is not None
            if rec.sample_id not in counts:
                skipped += 1
                continue
            j, t = counts[rec.sample_id]
        else:
            try:
                t = measure_text(serialize_toon(rec.graph).raw_text, measure)
                j = measure_text(serialize_json(rec.graph), measure)
            except SerializationError as e:
                logger.warning("Skipping %s: %s", rec.sample_id, e)
                skipped += 1
                continue
        toon_lengths.append(t)
        json_lengths.append(j)

    if not toon_lengths:
        raise ValueError("No record could be measured")
    stats = LengthStats(measure, len(toon_lengths), LengthSummary.of(toon_lengths), LengthSummary.of(json_lengths), skipped)
    logger.info(
        "Length stats (%s) over %d record(s): mean JSON %.1f -> TOON %.1f (%+.1f%%)",
        measure.value, stats.count, stats.json.mean, stats.toon.mean, stats.reduction_pct["mean"],
    )
    return stats
