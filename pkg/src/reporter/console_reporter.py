"""
Console reporter: prints evaluation, reward and dataset tables.

Numbers are rounded half-up to 3 decimals, failure rates shown as
percentages with 2 decimals.
"""

import logging
from typing import Mapping, Optional, Sequence

from src.dataset.filtering import FilterStats
from src.dataset.length_stats import STATISTICS, LengthStats
from src.dataset.thinning import ThinningReport
from src.metrics.report import MetricsReport, format_metric, format_percent
from src.metrics.sgdet import SgdetAtK
from src.reward.engine import RewardBreakdown

logger = logging.getLogger(__name__)

BOLD = "\033[1m"
RESET = "\033[0m"

REWARD_COLUMNS = ("format", "obj_cls", "obj_box", "rel_recall", "rel_precision", "rel_f1", "penalty_obj", "penalty_rel", "total")


def _banner(title: str, subtitle: str = "") -> list[str]:
    lines = ["", f"{BOLD}{'=' * 60}{RESET}", f"{BOLD}  {title}{RESET}"]
    if subtitle:
        lines.append(f"  {subtitle}")
    lines += [f"{BOLD}{'=' * 60}{RESET}", ""]
    return lines


def _row(cells: Sequence[str], widths: Sequence[int]) -> str:
    return "  " + "  ".join(c.rjust(w) for c, w in zip(cells, widths))


def _emit(lines: list[str]) -> str:
    report = "\n".join(lines)
    print(report)
    return report


def report_metrics_console(report: MetricsReport, source: str = "") -> str:
    """Fail rate, object P/R/F1, relation P/R/F1 and SGG score in one row."""
    header = ("Fail. rate", "Obj P", "Obj R", "Obj F1", "Rel P", "Rel R", "Rel F1", "SGG")
    values = (
        format_percent(report.failure_rate),
        *(format_metric(getattr(report, f)) for f in ("obj_p", "obj_r", "obj_f1", "rel_p", "rel_r", "rel_f1")),
        format_metric(report.sgg_score),
    )
    widths = [max(len(h), len(v)) for h, v in zip(header, values)]
    lines = _banner(f"Scene graph evaluation ({report.mode.value})", source)
    lines.append(_row(header, widths))
    lines.append(_row(values, widths))
    lines.append("")
    lines.append(f"  Samples: {report.num_samples}, failed: {report.num_failed}"
                 + ("" if report.include_failed else " (excluded from averages)"))
    if report.judge_failures:
        lines.append(f"  Judge failures (scored as non-matches): {report.judge_failures}")
    lines.append("")
    logger.info("Console metrics report: %d sample(s)", report.num_samples)
    return _emit(lines)


def report_sgdet_console(results: Mapping[int, SgdetAtK], source: str = "", num_samples: Optional[int] = None) -> str:
    header = ("K", "P@K", "R@K", "F1@K")
    rows = [(str(k), format_metric(r.precision), format_metric(r.recall), format_metric(r.f1))
            for k, r in sorted(results.items())]
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) for i in range(len(header))]
    lines = _banner("SGDET with constraint", source)
    lines.append(_row(header, widths))
    lines += [_row(r, widths) for r in rows]
    if num_samples is not None:
        lines += ["", f"  Samples: {num_samples}"]
    lines.append("")
    return _emit(lines)


def report_rewards_console(rows: Sequence[tuple[str, RewardBreakdown]], source: str = "") -> str:
    """Per-sample reward components and their means."""
    header = ("sample", "valid", *REWARD_COLUMNS)
    table = [
        (sid, str(b.valid_mask), *(format_metric(getattr(b, c)) for c in REWARD_COLUMNS))
        for sid, b in rows
    ]
    if rows:
        means = tuple(format_metric(sum(getattr(b, c) for _, b in rows) / len(rows)) for c in REWARD_COLUMNS)
        valid = format_metric(sum(b.valid_mask for _, b in rows) / len(rows))
        table.append(("mean", valid, *means))
    widths = [max(len(header[i]), *(len(r[i]) for r in table)) if table else len(header[i]) for i in range(len(header))]
    lines = _banner("Reward breakdown", source)
    lines.append(_row(header, widths))
    lines += [_row(r, widths) for r in table]
    lines.append("")
    logger.info("Console reward report: %d sample(s)", len(rows))
    return _emit(lines)


def report_filter_console(stats: FilterStats, source: str = "") -> str:
    lines = _banner("Zero-relation filtering", source)
    lines.append(f"  Before:  {stats.before}")
    lines.append(f"  Removed: {stats.removed} ({format_metric(stats.removed_pct, 2)}%)")
    lines.append(f"  Kept:    {stats.kept}")
    lines.append("")
    return _emit(lines)


def report_thinning_console(report: ThinningReport, source: str = "") -> str:
    lines = _banner("BaseAnnot frame thinning", source)
    lines.append(f"  Videos:             {report.videos}")
    lines.append(f"  Frames:             {report.frames_before} -> {report.frames_after} "
                 f"({format_metric(report.retained_pct, 2)}% retained)")
    lines.append(f"  Object categories:  {report.object_categories_before} -> {report.object_categories_after}")
    lines.append(f"  Predicates:         {report.predicates_before} -> {report.predicates_after}")
    lines.append("")
    return _emit(lines)


def report_length_console(stats: LengthStats, source: str = "") -> str:
    header = ("", *STATISTICS)
    rows = [
        ("JSON", *(format_metric(stats.json.get(s), 1) for s in STATISTICS)),
        ("TOON", *(format_metric(stats.toon.get(s), 1) for s in STATISTICS)),
        ("ratio", *(format_metric(stats.ratios[s], 3) for s in STATISTICS)),
        ("change %", *(format_metric(stats.reduction_pct[s], 1) for s in STATISTICS)),
    ]
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) for i in range(len(header))]
    lines = _banner(f"Serialized length ({stats.measure.value})", source)
    lines.append(_row(header, widths))
    lines += [_row(r, widths) for r in rows]
    lines += ["", f"  Records: {stats.count}" + (f", skipped: {stats.skipped}" if stats.skipped else ""), ""]
    return _emit(lines)
