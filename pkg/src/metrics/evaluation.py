"""
Per-sample object and relation precision/recall/F1.

Both protocols first align predicted to ground-truth objects by Hungarian
assignment on 1 - IoU. Strict evaluation then requires exact label and
predicate equality; soft evaluation sends the disputed aligned pairs (unequal
labels, unequal predicates on aligned endpoints) to a judge and counts
accepted pairs as true positives.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np
import numpy.typing as npt

from src.errors import JudgeError
from src.graph.model import SceneGraph
from src.llm.judge import CachedJudge, JudgeClient
from src.llm.prompts import describe_scene
from src.matching.geometry import boxes_array, pairwise_iou
from src.matching.hungarian import hungarian
from src.matching.matcher import MatchConfig, max_bipartite_pairs, relation_endpoints, strict_relation_eligibility
from src.toon.outcome import ParseOutcome

logger = logging.getLogger(__name__)


class EvalMode(Enum):
    STRICT = "strict"
    SOFT = "soft"


def safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


def f1_score(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


@dataclass(frozen=True)
class SampleMetrics:
    obj_p: float
    obj_r: float
    obj_f1: float
    rel_p: float
    rel_r: float
    rel_f1: float
    obj_tp: int
    obj_fp: int
    obj_fn: int
    rel_tp: int
    rel_fp: int
    rel_fn: int
    failed: bool = False
    judge_failures: int = 0

    @classmethod
    def from_counts(
        cls,
        obj_tp: int, num_gt_objects: int, num_pred_objects: int,
        rel_tp: int, num_gt_relations: int, num_pred_relations: int,
        failed: bool = False,
        judge_failures: int = 0,
    ) -> "SampleMetrics":
        obj_p = safe_div(obj_tp, num_pred_objects)
        obj_r = safe_div(obj_tp, num_gt_objects)
        rel_p = safe_div(rel_tp, num_pred_relations)
        rel_r = safe_div(rel_tp, num_gt_relations)
        return cls(
            obj_p=obj_p, obj_r=obj_r, obj_f1=f1_score(obj_p, obj_r),
            rel_p=rel_p, rel_r=rel_r, rel_f1=f1_score(rel_p, rel_r),
            obj_tp=obj_tp, obj_fp=num_pred_objects - obj_tp, obj_fn=num_gt_objects - obj_tp,
            rel_tp=rel_tp, rel_fp=num_pred_relations - rel_tp, rel_fn=num_gt_relations - rel_tp,
            failed=failed, judge_failures=judge_failures,
        )

    @classmethod
    def failed_sample(cls, gt: SceneGraph) -> "SampleMetrics":
        """All-zero metrics for an unparseable or invalid prediction."""
        return cls.from_counts(0, len(gt.objects), 0, 0, len(gt.relations), 0, failed=True)


def align_objects(
    gt: SceneGraph, pred: SceneGraph,
) -> tuple[dict[int, int], npt.NDArray[np.float64]]:
    """Hungarian alignment on 1 - IoU: (gt position -> pred position, IoU matrix)."""
    iou = pairwise_iou(boxes_array(gt.objects), boxes_array(pred.objects))
    if iou.size == 0:
        return {}, iou
    return dict(hungarian(1.0 - iou)), iou


def evaluate_sample_strict(
    gt: SceneGraph,
    pred: ParseOutcome,
    cfg: Optional[MatchConfig] = None,
) -> SampleMetrics:
    """Strict lexical metrics for one sample; invalid predictions score zero."""
    cfg = cfg or MatchConfig()
    graph = pred.valid_graph
    if graph is None:
        return SampleMetrics.failed_sample(gt)

    aligned, iou = align_objects(gt, graph)
    obj_tp = sum(
        1 for i, j in aligned.items()
        if gt.objects[i].label == graph.objects[j].label and iou[i, j] >= cfg.iou_threshold
    )
    rel_pairs = max_bipartite_pairs(strict_relation_eligibility(gt, graph, cfg, aligned))
    return SampleMetrics.from_counts(
        obj_tp, len(gt.objects), len(graph.objects),
        len(rel_pairs), len(gt.relations), len(graph.relations),
    )


def scene_context(gt: SceneGraph, pred: Optional[SceneGraph] = None) -> str:
    """Scene description handed to the judge with every disputed pair."""
    text = describe_scene(gt)
    if pred is not None:
        text += "\nPredicted " + describe_scene(pred)
    return text


class _SoftJudgement:
    """Judge calls for one sample, memoised locally and failure-counted."""

    def __init__(self, judge: JudgeClient, context: str):
        self.judge = judge
        self.context = context
        self.failures = 0
        self._memo: dict[tuple[str, ...], bool] = {}

    def _verdict(self, key: tuple[str, ...], ask: Callable[[], bool]) -> bool:
        if key not in self._memo:
            try:
                self._memo[key] = bool(ask())
            except JudgeError as e:
                self.failures += 1
                logger.warning("Judge failure on %s, scoring as non-match: %s", key, e)
                self._memo[key] = False
        return self._memo[key]

    def objects(self, a: str, b: str) -> bool:
        if a == b:
            return True
        return self._verdict(("obj", a, b), lambda: self.judge.judge_objects(a, b, self.context))

    def predicates(self, a: str, b: str, subject: str, obj: str) -> bool:
        if a == b:
            return True
        return self._verdict(
            ("pred", a, b, subject, obj),
            lambda: self.judge.judge_predicates(a, b, subject, obj, self.context),
        )


def evaluate_sample_soft(
    gt: SceneGraph,
    pred: ParseOutcome,
    cfg: Optional[MatchConfig] = None,
    judge: Optional[JudgeClient] = None,
) -> SampleMetrics:
    """
    Judge-assisted metrics for one sample.

    Same alignment as strict evaluation. An aligned object pair with IoU at
    or above the threshold counts when the labels are equal or the judge
    accepts them. A relation pair counts when both endpoints are such
    accepted aligned pairs, the relation group (if any) agrees, and the
    predicates are equal or judge-accepted. Judge failures score the pair as
    a non-match and are tallied in judge_failures.
    """
    if judge is None:
        raise ValueError("Soft evaluation needs a judge")
    cfg = cfg or MatchConfig()
    graph = pred.valid_graph
    if graph is None:
        return SampleMetrics.failed_sample(gt)

    aligned, iou = align_objects(gt, graph)
    session = _SoftJudgement(judge, scene_context(gt, graph))

    accepted: dict[int, int] = {}
    for i, j in aligned.items():
        if iou[i, j] >= cfg.iou_threshold and session.objects(gt.objects[i].label, graph.objects[j].label):
            accepted[i] = j

    eligible = np.zeros((len(gt.relations), len(graph.relations)), dtype=bool)
    gt_ends, pred_ends = relation_endpoints(gt), relation_endpoints(graph)
    for a, (gt_rel, gt_end) in enumerate(zip(gt.relations, gt_ends)):
        if gt_end is None:
            continue
        gs, go = gt_end
        if gs not in accepted or go not in accepted:
            continue
        for b, (pred_rel, pred_end) in enumerate(zip(graph.relations, pred_ends)):
            if pred_end != (accepted[gs], accepted[go]) or pred_rel.group != gt_rel.group:
                continue
            eligible[a, b] = session.predicates(
                gt_rel.predicate, pred_rel.predicate, gt.objects[gs].label, gt.objects[go].label,
            )
    rel_tp = len(max_bipartite_pairs(eligible))
    return SampleMetrics.from_counts(
        len(accepted), len(gt.objects), len(graph.objects),
        rel_tp, len(gt.relations), len(graph.relations),
        judge_failures=session.failures,
    )


def evaluate_samples(
    gts: Sequence[SceneGraph],
    preds: Sequence[ParseOutcome],
    cfg: Optional[MatchConfig] = None,
    mode: EvalMode = EvalMode.STRICT,
    judge: Optional[JudgeClient] = None,
    max_in_flight: int = 8,
) -> list[SampleMetrics]:
    """
    Evaluate aligned lists of ground truths and predictions, in input order.

    Soft mode shares one CachedJudge across samples and runs at most
    max_in_flight samples (hence judge requests) concurrently.
    """
    if len(gts) != len(preds):
        raise ValueError(f"Got {len(gts)} ground truth(s) but {len(preds)} prediction(s)")
    if max_in_flight < 1:
        raise ValueError(f"max_in_flight must be >= 1, got {max_in_flight}")
    cfg = cfg or MatchConfig()

    t0 = time.monotonic()
    if mode is EvalMode.SOFT:
        if judge is None:
            raise ValueError("Soft evaluation needs a judge")
        shared = judge if isinstance(judge, CachedJudge) else CachedJudge(judge)
        with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
            results = list(pool.map(lambda pair: evaluate_sample_soft(pair[0], pair[1], cfg, shared), zip(gts, preds)))
        logger.info(
            "Judge: %d verdict(s) cached, %d failure(s)", len(shared), shared.failures,
        )
    else:
        results = [evaluate_sample_strict(g, p, cfg) for g, p in zip(gts, preds)]

    logger.info(
        "Evaluated %d sample(s) in %s mode in %.1fms (%d failed)",
        len(results), mode.value, (time.monotonic() - t0) * 1000, sum(r.failed for r in results),
    )
    return results
