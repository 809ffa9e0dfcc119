"""
SGDET with-constraint P@K / R@K / F1@K for generative models.

Generative models emit no confidence scores, so the rank of a predicted
triplet is its emission order (first emitted is rank 1). Under the
with-constraint rule only the first-ranked predicate of each (subject,
object) pair is kept, before truncation to the top K. The kept triplets are
matched one-to-one against ground truth: equal subject label, predicate and
object label, and both boxes at IoU >= threshold.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Hashable, Iterable, Optional, Sequence

import numpy as np

from src.graph.model import BoundingBox, SceneGraph
from src.matching.geometry import iou
from src.matching.matcher import MatchConfig, max_bipartite_pairs
from src.metrics.evaluation import f1_score, safe_div

logger = logging.getLogger(__name__)

DEFAULT_K_VALUES = (10, 20, 50)


class PrecisionMode(Enum):
    # TP / min(K, |pred|): unfilled slots are not counted against the model
    MIN_K_PRED = "min"
    # TP / K
    K = "k"


@dataclass(frozen=True)
class Triplet:
    subject_label: str
    subject_box: BoundingBox
    predicate: str
    object_label: str
    object_box: BoundingBox
    subject_id: Optional[int] = None
    object_id: Optional[int] = None

    @property
    def pair_key(self) -> Hashable:
        """Identity of the (subject, object) pair for the with-constraint rule."""
        if self.subject_id is not None and self.object_id is not None:
            return (self.subject_id, self.object_id)
        return (self.subject_label, self.subject_box, self.object_label, self.object_box)


@dataclass(frozen=True)
class SgdetAtK:
    k: int
    precision: float
    recall: float
    f1: float
    tp: int
    num_gt: int
    num_pred: int


def triplets_from_graph(g: SceneGraph) -> list[Triplet]:
    """Relation triplets with endpoint labels and boxes, in emission order."""
    out = []
    for rel in g.relations:
        s, o = g.object_by_id(rel.subject_id), g.object_by_id(rel.object_id)
        if s is None or o is None:
            continue
        out.append(Triplet(s.label, s.box, rel.key, o.label, o.box, s.id, o.id))
    return out


def apply_constraint(ranked: Iterable[Triplet]) -> list[Triplet]:
    """Keep only the first-ranked predicate for each (subject, object) pair."""
    seen: set[Hashable] = set()
    kept = []
    for t in ranked:
        if t.pair_key in seen:
            continue
        seen.add(t.pair_key)
        kept.append(t)
    return kept


def _eligibility(gt: Sequence[Triplet], pred: Sequence[Triplet], threshold: float) -> np.ndarray:
    eligible = np.zeros((len(gt), len(pred)), dtype=bool)
    for a, g in enumerate(gt):
        for b, p in enumerate(pred):
            eligible[a, b] = (
                g.predicate == p.predicate
                and g.subject_label == p.subject_label
                and g.object_label == p.object_label
                and iou(g.subject_box, p.subject_box) >= threshold
                and iou(g.object_box, p.object_box) >= threshold
            )
    return eligible


def evaluate_sgdet(
    gt: Sequence[Triplet],
    pred_ranked: Sequence[Triplet],
    k_values: Iterable[int] = DEFAULT_K_VALUES,
    cfg: Optional[MatchConfig] = None,
    precision_mode: PrecisionMode = PrecisionMode.MIN_K_PRED,
) -> dict[int, SgdetAtK]:
    """
    Per-K precision, recall and F1 for one sample.

    Raises:
        ValueError: if any K is <= 0.
    """
    ks = sorted(set(k_values))
    if not ks or ks[0] <= 0:
        raise ValueError(f"K values must be positive, got {list(k_values)}")
    cfg = cfg or MatchConfig()

    constrained = apply_constraint(pred_ranked)
    eligible = _eligibility(gt, constrained, cfg.iou_threshold)
    results: dict[int, SgdetAtK] = {}
    for k in ks:
        top = min(k, len(constrained))
        tp = len(max_bipartite_pairs(eligible[:, :top]))
        denom = top if precision_mode is PrecisionMode.MIN_K_PRED else k
        p, r = safe_div(tp, denom), safe_div(tp, len(gt))
        results[k] = SgdetAtK(k, p, r, f1_score(p, r), tp, len(gt), top)
    return results


def aggregate_sgdet(samples: Sequence[dict[int, SgdetAtK]]) -> dict[int, SgdetAtK]:
    """Macro average per K across samples (tp/num_gt/num_pred are summed)."""
    if not samples:
        raise ValueError("Cannot aggregate an empty list of samples")
    ks = sorted(samples[0])
    out = {}
    for k in ks:
        rows = [s[k] for s in samples]
        out[k] = SgdetAtK(
            k=k,
            precision=math.fsum(r.precision for r in rows) / len(rows),
            recall=math.fsum(r.recall for r in rows) / len(rows),
            f1=math.fsum(r.f1 for r in rows) / len(rows),
            tp=sum(r.tp for r in rows),
            num_gt=sum(r.num_gt for r in rows),
            num_pred=sum(r.num_pred for r in rows),
        )
    logger.info(
        "SGDET over %d sample(s): %s",
        len(samples), ", ".join(f"R@{k}={out[k].recall:.4f}" for k in ks),
    )
    return out
