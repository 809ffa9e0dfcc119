"""
Hallucination-aware reward for scene graph completions.

    total = m(G^) * (w_f + R_obj_cls + R_obj_box + R_rel_recall
                     + R_rel_precision + R_rel_f1 - P_obj - P_rel)

m(G^) is the validity mask of the parsed answer. The pipeline for one
completion is: extract the answer block, parse TOON, set the mask, match
objects and relations, compute each term. Diagnostics (zero weight) are
filled in for every completion, valid or not.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Any, Optional, Sequence

from src.graph.model import SceneGraph
from src.matching.matcher import MatchConfig, MatchResult, match_graphs
from src.reward.weights import RewardWeights
from src.toon.answer import extract_answer
from src.toon.outcome import DiagnosticCode, ParseOutcome

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RewardDiagnostics:
    """Monitoring signals; logged but never weighted."""
    frac_no_rel: float
    num_pred_objs: int
    num_pred_rels: int
    frac_invalid_rel: float
    has_answer_tags: int


@dataclass(frozen=True)
class RewardBreakdown:
    valid_mask: int
    format: float
    obj_cls: float
    obj_box: float
    rel_recall: float
    rel_precision: float
    rel_f1: float
    penalty_obj: float
    penalty_rel: float
    total: float
    diagnostics: RewardDiagnostics
    matched_objects: int = 0
    matched_relations: int = 0
    gate_matched_iou: bool = True

    def to_dict(self) -> dict[str, Any]:
        """Flat dict with diagnostics inlined (wire and report form)."""
        data = asdict(self)
        data.update(data.pop("diagnostics"))
        return data


def reward_obj_cls(match: MatchResult, w_cls: float) -> float:
    """w_cls * sum of label similarities over the assignment / max(gt objects, predicted objects)."""
    denom = max(match.num_gt_objects, match.num_pred_objects)
    if denom == 0:
        return 0.0
    return w_cls * (sum(p.similarity for p in match.per_pair) / denom)


def reward_obj_box(match: MatchResult, weights: RewardWeights) -> float:
    """
    w_box / max(gt objects, predicted objects) * sum over the assignment of
    (lambda_iou * IoU + lambda_l1 * exp(-L1)) / (lambda_iou + lambda_l1).
    """
    denom = max(match.num_gt_objects, match.num_pred_objects)
    if denom == 0:
        return 0.0
    mix = weights.lambda_iou + weights.lambda_l1
    total = sum(
        (weights.lambda_iou * p.iou + weights.lambda_l1 * math.exp(-p.l1)) / mix
        for p in match.per_pair
    )
    return weights.w_box * (total / denom)


def reward_relations(
    matched: int,
    num_gt: int,
    num_pred: int,
    weights: RewardWeights,
    epsilon: float,
) -> tuple[float, float, float]:
    """(recall term, precision term, F1 term) from matched, gt and predicted relation counts."""
    recall = matched / max(num_gt, epsilon)
    precision = matched / max(num_pred, epsilon)
    # epsilon bounds the denominator from below; a perfect answer gets exactly w_f1
    f1 = 2 * precision * recall / max(precision + recall, epsilon)
    return weights.w_r * recall, weights.w_p * precision, weights.w_f1 * f1


def hallucination_penalties(
    matched_objects: int,
    matched_relations: int,
    num_pred_objects: int,
    num_pred_relations: int,
    weights: RewardWeights,
    epsilon: float,
) -> tuple[float, float]:
    """(P_obj, P_rel): weight * (unmatched predicted fraction) ** alpha."""
    obj_frac = (num_pred_objects - matched_objects) / max(num_pred_objects, epsilon)
    rel_frac = (num_pred_relations - matched_relations) / max(num_pred_relations, epsilon)
    return weights.w_obj_h * obj_frac ** weights.alpha_obj, weights.w_rel_h * rel_frac ** weights.alpha_rel


def reward_diagnostics(outcome: ParseOutcome, epsilon: float = 1e-6) -> RewardDiagnostics:
    """Diagnostics from the best-effort parse, available even for invalid output."""
    g = outcome.graph
    num_objs = len(g.objects) if g is not None else 0
    num_rels = len(g.relations) if g is not None else 0
    invalid = 0
    if g is not None:
        ids = {o.id for o in g.objects}
        invalid = sum(
            1 for r in g.relations
            if r.subject_id not in ids or r.object_id not in ids or r.subject_id == r.object_id
        )
    return RewardDiagnostics(
        frac_no_rel=1.0 if num_rels == 0 else 0.0,
        num_pred_objs=num_objs,
        num_pred_rels=num_rels,
        frac_invalid_rel=invalid / max(num_rels, epsilon),
        has_answer_tags=0 if DiagnosticCode.MISSING_TAGS in outcome.codes else 1,
    )


def score_outcome(
    gt: SceneGraph,
    outcome: ParseOutcome,
    weights: Optional[RewardWeights] = None,
    match_cfg: Optional[MatchConfig] = None,
) -> RewardBreakdown:
    """Score an already-parsed prediction against a cleaned ground-truth graph."""
    weights = weights or RewardWeights()
    cfg = match_cfg or MatchConfig()
    diagnostics = reward_diagnostics(outcome, cfg.epsilon)

    pred = outcome.valid_graph
    if pred is None:
        return RewardBreakdown(
            valid_mask=0, format=0.0, obj_cls=0.0, obj_box=0.0,
            rel_recall=0.0, rel_precision=0.0, rel_f1=0.0,
            penalty_obj=0.0, penalty_rel=0.0, total=0.0,
            diagnostics=diagnostics, gate_matched_iou=cfg.gate_matched_iou,
        )

    match = match_graphs(gt, pred, cfg)
    format_term = weights.w_f
    obj_cls = reward_obj_cls(match, weights.w_cls)
    obj_box = reward_obj_box(match, weights)
    rel_recall, rel_precision, rel_f1 = reward_relations(
        match.matched_relations, len(gt.relations), len(pred.relations), weights, cfg.epsilon,
    )
    penalty_obj, penalty_rel = hallucination_penalties(
        match.matched_objects, match.matched_relations,
        len(pred.objects), len(pred.relations), weights, cfg.epsilon,
    )
    total = format_term + obj_cls + obj_box + rel_recall + rel_precision + rel_f1 - penalty_obj - penalty_rel
    return RewardBreakdown(
        valid_mask=1,
        format=format_term,
        obj_cls=obj_cls,
        obj_box=obj_box,
        rel_recall=rel_recall,
        rel_precision=rel_precision,
        rel_f1=rel_f1,
        penalty_obj=penalty_obj,
        penalty_rel=penalty_rel,
        total=total,
        diagnostics=diagnostics,
        matched_objects=match.matched_objects,
        matched_relations=match.matched_relations,
        gate_matched_iou=cfg.gate_matched_iou,
    )


def score_completion(
    gt: SceneGraph,
    completion: str,
    weights: Optional[RewardWeights] = None,
    match_cfg: Optional[MatchConfig] = None,
) -> RewardBreakdown:
    """
    Score one raw model completion against its ground-truth graph.

    Unparseable or invalid completions get valid_mask=0 and total=0; the
    diagnostics are populated either way.
    """
    outcome = extract_answer(completion, gt.schema)
    return score_outcome(gt, outcome, weights, match_cfg)


def score_batch(
    items: Sequence[tuple[SceneGraph, str]],
    weights: Optional[RewardWeights] = None,
    match_cfg: Optional[MatchConfig] = None,
    max_workers: Optional[int] = None,
) -> list[RewardBreakdown]:
    """
    Score (ground truth, completion) pairs across worker threads.

    Results are in input order and identical to calling score_completion on
    each item.
    """
    weights = weights or RewardWeights()
    cfg = match_cfg or MatchConfig()
    if not items:
        return []
    t0 = time.monotonic()
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        results = list(pool.map(lambda item: score_completion(item[0], item[1], weights, cfg), items))
    elapsed_ms = (time.monotonic() - t0) * 1000
    valid = sum(r.valid_mask for r in results)
    logger.info(
        "Scored %d completion(s) in %.1fms: %d valid, mean total %.4f",
        len(results), elapsed_ms, valid, sum(r.total for r in results) / len(results),
    )
    return results
