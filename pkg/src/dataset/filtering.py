"""Zero-relation filtering with before/removed/kept statistics."""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Iterable, Iterator

from src.dataset.cleaning import clean_graph
from src.dataset.records import DatasetSplit, Record

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FilterStats:
    before: int
    removed: int
    kept: int
    removed_pct: float

    @classmethod
    def from_counts(cls, before: int, removed: int) -> "FilterStats":
        return cls(
            before=before,
            removed=removed,
            kept=before - removed,
            removed_pct=100.0 * removed / before if before else 0.0,
        )

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


class ZeroRelationFilter:
    """
    Streaming filter: iterate filter(records) to get the cleaned records that
    still have relations; stats are complete once the iterator is exhausted.
    """

    def __init__(self) -> None:
        self.before = 0
        self.removed = 0

    def __call__(self, records: Iterable[Record]) -> Iterator[Record]:
        for rec in records:
            self.before += 1
            cleaned = clean_graph(rec.graph)
            if not cleaned.relations:
                self.removed += 1
                logger.debug("Dropping %s: no relations after cleaning", rec.sample_id)
                continue
            yield rec.with_graph(cleaned)

    @property
    def stats(self) -> FilterStats:
        return FilterStats.from_counts(self.before, self.removed)


def filter_zero_relation(split: DatasetSplit) -> tuple[DatasetSplit, FilterStats]:
    """Drop records whose cleaned graph has no relations; kept records are cleaned."""
    flt = ZeroRelationFilter()
    kept = DatasetSplit(split.name, list(flt(split.records)))
    stats = flt.stats
    logger.info(
        "Zero-relation filter on %s: %d before, %d removed (%.2f%%), %d kept",
        split.name, stats.before, stats.removed, stats.removed_pct, stats.kept,
    )
    return kept, stats
