"""
Object and relation matching between a ground-truth and a predicted graph.

Objects are matched one-to-one by Hungarian assignment on

    C(v_i, v^_j) = lambda_s * (1 - sim) + lambda_g * (1 - GIoU) + lambda_l * L1

with sim = 1 for exactly equal labels and 0 otherwise. Relations are matched
one-to-one by maximum bipartite matching over the strictly eligible pairs:
equal subject label, predicate and object label, and both endpoint boxes at
IoU >= threshold.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
import numpy.typing as npt
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from src.graph.model import IMAGE_HEIGHT, IMAGE_WIDTH, SceneGraph
from src.matching.geometry import boxes_array, pairwise_giou, pairwise_iou, pairwise_l1
from src.matching.hungarian import hungarian

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MatchConfig:
    """Cost weights and thresholds shared by rewards and strict evaluation."""
    lambda_s: float = 1.0
    lambda_g: float = 1.0
    lambda_l: float = 1.0
    iou_threshold: float = 0.5
    epsilon: float = 1e-6
    # When False, matched_objects counts every assigned pair with equal labels, ignoring IoU
    gate_matched_iou: bool = True
    image_width: float = IMAGE_WIDTH
    image_height: float = IMAGE_HEIGHT

    def __post_init__(self) -> None:
        numbers = (self.lambda_s, self.lambda_g, self.lambda_l, self.iou_threshold, self.epsilon, self.image_width, self.image_height)
        if not all(isinstance(v, (int, float)) and math.isfinite(v) for v in numbers):
            raise ValueError("Match settings must be finite numbers")
        if min(self.lambda_s, self.lambda_g, self.lambda_l) < 0:
            raise ValueError("Cost weights lambda_s, lambda_g, lambda_l must be non-negative")
        if not 0.0 <= self.iou_threshold <= 1.0:
            raise ValueError(f"iou_threshold must be in [0, 1], got {self.iou_threshold}")
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.image_width <= 0 or self.image_height <= 0:
            raise ValueError("Image width and height must be positive")


@dataclass(frozen=True)
class PairScore:
    """Scores of one assigned (ground truth, prediction) object pair."""
    gt_index: int
    pred_index: int
    similarity: float
    iou: float
    giou: float
    l1: float
    cost: float
    matched: bool


@dataclass(frozen=True)
class MatchResult:
    """
    Optimal object assignment and matched counts.

    assignment holds (gt position, pred position) pairs; relation_pairs holds
    (gt relation index, pred relation index) pairs once relations are matched.
    """
    assignment: tuple[tuple[int, int], ...]
    matched_objects: int
    per_pair: tuple[PairScore, ...]
    num_gt_objects: int
    num_pred_objects: int
    matched_relations: int = 0
    relation_pairs: tuple[tuple[int, int], ...] = ()

    @property
    def total_cost(self) -> float:
        return sum(p.cost for p in self.per_pair)


def _object_cost(
    gt: SceneGraph,
    pred: SceneGraph,
    cfg: MatchConfig,
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64], npt.NDArray[np.float64], npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    gt_boxes, pred_boxes = boxes_array(gt.objects), boxes_array(pred.objects)
    sim = np.array(
        [[1.0 if g.label == p.label else 0.0 for p in pred.objects] for g in gt.objects],
        dtype=np.float64,
    ).reshape(len(gt.objects), len(pred.objects))
    giou = pairwise_giou(gt_boxes, pred_boxes)
    iou = pairwise_iou(gt_boxes, pred_boxes)
    l1 = pairwise_l1(gt_boxes, pred_boxes, cfg.image_width, cfg.image_height)
    cost = cfg.lambda_s * (1.0 - sim) + cfg.lambda_g * (1.0 - giou) + cfg.lambda_l * l1
    return cost, sim, iou, giou, l1


def match_objects(gt: SceneGraph, pred: SceneGraph, cfg: Optional[MatchConfig] = None) -> MatchResult:
    """
    One-to-one Hungarian matching of predicted to ground-truth objects.

    matched_objects counts assigned pairs with equal labels and, unless
    cfg.gate_matched_iou is off, IoU >= cfg.iou_threshold. A zero-area box
    has IoU 0 with everything, so under the gate it is assigned but never
    matched.
    """
    cfg = cfg or MatchConfig()
    if not gt.objects or not pred.objects:
        return MatchResult((), 0, (), len(gt.objects), len(pred.objects))

    cost, sim, iou, giou, l1 = _object_cost(gt, pred, cfg)
    pairs = hungarian(cost)
    scores = []
    for i, j in pairs:
        matched = bool(sim[i, j] == 1.0 and (not cfg.gate_matched_iou or iou[i, j] >= cfg.iou_threshold))
        scores.append(PairScore(
            gt_index=i, pred_index=j,
            similarity=float(sim[i, j]), iou=float(iou[i, j]), giou=float(giou[i, j]),
            l1=float(l1[i, j]), cost=float(cost[i, j]), matched=matched,
        ))
    matched_count = sum(1 for s in scores if s.matched)
    logger.debug(
        "Object matching: gt=%d pred=%d assigned=%d matched=%d",
        len(gt.objects), len(pred.objects), len(pairs), matched_count,
    )
    return MatchResult(
        assignment=tuple(pairs),
        matched_objects=matched_count,
        per_pair=tuple(scores),
        num_gt_objects=len(gt.objects),
        num_pred_objects=len(pred.objects),
    )


def max_bipartite_pairs(eligible: npt.NDArray[np.bool_]) -> list[tuple[int, int]]:
    """Maximum one-to-one matching on a boolean eligibility matrix (Hopcroft-Karp)."""
    if eligible.size == 0 or not eligible.any():
        return []
    matched = maximum_bipartite_matching(csr_matrix(eligible.astype(np.int8)), perm_type="column")
    return [(row, int(col)) for row, col in enumerate(matched) if col >= 0]


def relation_endpoints(g: SceneGraph) -> list[Optional[tuple[int, int]]]:
    """Object positions (subject, object) of every relation; None when dangling."""
    pos = g.positions()
    out: list[Optional[tuple[int, int]]] = []
    for rel in g.relations:
        s, o = pos.get(rel.subject_id), pos.get(rel.object_id)
        out.append(None if s is None or o is None else (s, o))
    return out


def strict_relation_eligibility(
    gt: SceneGraph,
    pred: SceneGraph,
    cfg: MatchConfig,
    aligned: Optional[dict[int, int]] = None,
) -> npt.NDArray[np.bool_]:
    """
    Boolean (gt relations, predicted relations) matrix of relation pairs that may match.

    When aligned (gt position -> pred position) is given, the predicted
    endpoints must additionally be the aligned partners of the gt endpoints.
    """
    eligible = np.zeros((len(gt.relations), len(pred.relations)), dtype=bool)
    if eligible.size == 0:
        return eligible
    iou = pairwise_iou(boxes_array(gt.objects), boxes_array(pred.objects))
    passes = iou >= cfg.iou_threshold
    gt_ends, pred_ends = relation_endpoints(gt), relation_endpoints(pred)
    for a, (gt_rel, gt_end) in enumerate(zip(gt.relations, gt_ends)):
        if gt_end is None:
            continue
        gs, go = gt_end
        for b, (pred_rel, pred_end) in enumerate(zip(pred.relations, pred_ends)):
            if pred_end is None or pred_rel.key != gt_rel.key:
                continue
            ps, po = pred_end
            if aligned is not None and (aligned.get(gs) != ps or aligned.get(go) != po):
                continue
            eligible[a, b] = bool(
                gt.objects[gs].label == pred.objects[ps].label
                and gt.objects[go].label == pred.objects[po].label
                and passes[gs, ps]
                and passes[go, po]
            )
    return eligible


def match_relations(
    gt: SceneGraph,
    pred: SceneGraph,
    obj_match: MatchResult,
    cfg: Optional[MatchConfig] = None,
    require_alignment: bool = False,
) -> MatchResult:
    """
    Strict one-to-one relation matching.

    Args:
        gt: Ground-truth graph.
        pred: Predicted graph.
        obj_match: Object matching computed on the same graphs.
        cfg: Match configuration (IoU threshold).
        require_alignment: Also require predicted endpoints to be the objects
            assigned to the gt endpoints in obj_match (evaluation protocol).

    Returns:
        obj_match with relation_pairs and matched_relations filled in.
    """
    cfg = cfg or MatchConfig()
    aligned = dict(obj_match.assignment) if require_alignment else None
    pairs = max_bipartite_pairs(strict_relation_eligibility(gt, pred, cfg, aligned))
    logger.debug("Relation matching: gt=%d pred=%d matched=%d", len(gt.relations), len(pred.relations), len(pairs))
    return replace(obj_match, matched_relations=len(pairs), relation_pairs=tuple(pairs))


def match_graphs(gt: SceneGraph, pred: SceneGraph, cfg: Optional[MatchConfig] = None) -> MatchResult:
    """Object matching followed by strict relation matching (the reward pipeline)."""
    cfg = cfg or MatchConfig()
    return match_relations(gt, pred, match_objects(gt, pred, cfg), cfg)
