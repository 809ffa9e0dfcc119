"""Macro-averaged evaluation reports."""

import logging
import math
from dataclasses import asdict, dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Any, Sequence

from src.metrics.evaluation import EvalMode, SampleMetrics

logger = logging.getLogger(__name__)

METRIC_FIELDS = ("obj_p", "obj_r", "obj_f1", "rel_p", "rel_r", "rel_f1")


def format_metric(value: float, places: int = 3) -> str:
    """
    Round half-up on the shortest decimal form of value (0.4415 -> "0.442").

    Plain format() rounds the binary value, which can land on the wrong side
    of a decimal tie.
    """
    if not math.isfinite(value):
        return str(value)
    quantum = Decimal(1).scaleb(-places)
    return str(Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP))


def format_percent(value: float, places: int = 2) -> str:
    return format_metric(100.0 * value, places) + "%"


@dataclass(frozen=True)
class MetricsReport:
    obj_p: float
    obj_r: float
    obj_f1: float
    rel_p: float
    rel_r: float
    rel_f1: float
    sgg_score: float
    failure_rate: float
    num_samples: int
    num_failed: int
    mode: EvalMode = EvalMode.STRICT
    include_failed: bool = True
    judge_failures: int = 0

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["mode"] = self.mode.value
        return data


def aggregate(
    samples: Sequence[SampleMetrics],
    mode: EvalMode = EvalMode.STRICT,
    include_failed: bool = True,
) -> MetricsReport:
    """
    Macro-average per-sample metrics.

    Each metric is the arithmetic mean of the per-sample values (macro F1 is
    the mean of per-sample F1, not the harmonic mean of macro P and R).
    Failed samples count as zeros unless include_failed is off, in which case
    they only appear in failure_rate.

    Raises:
        ValueError: if samples is empty.
    """
    if not samples:
        raise ValueError("Cannot aggregate an empty list of samples")

    num_failed = sum(1 for s in samples if s.failed)
    pool = list(samples) if include_failed else [s for s in samples if not s.failed]
    means = {
        name: math.fsum(getattr(s, name) for s in pool) / len(pool) if pool else 0.0
        for name in METRIC_FIELDS
    }
    report = MetricsReport(
        **means,
        sgg_score=(means["obj_f1"] + means["rel_f1"]) / 2,
        failure_rate=num_failed / len(samples),
        num_samples=len(samples),
        num_failed=num_failed,
        mode=mode,
        include_failed=include_failed,
        judge_failures=sum(s.judge_failures for s in samples),
    )
    logger.info(
        "%s: %d sample(s), SGG %.4f (obj F1 %.4f, rel F1 %.4f), fail rate %.2f%%",
        mode.value, report.num_samples, report.sgg_score, report.obj_f1, report.rel_f1,
        100 * report.failure_rate,
    )
    return report
