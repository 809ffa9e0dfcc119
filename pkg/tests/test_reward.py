"""Tests for reward weights and the reward engine."""

import pytest

from src.errors import ConfigError
from src.graph import BoundingBox, Relation, SceneGraph, SceneObject, Schema
from src.matching import MatchConfig, match_graphs
from src.reward import (
    PRESETS,
    RewardWeights,
    hallucination_penalties,
    reward_obj_box,
    reward_obj_cls,
    reward_relations,
    score_batch,
    score_completion,
    score_outcome,
)
from src.toon import parse_toon, serialize_toon


def _answer(g):
    return f"<think>looking</think><answer>\n{serialize_toon(g).raw_text}</answer>"


# ---------------------------------------------------------------------------
# Weights
# ---------------------------------------------------------------------------

class TestRewardWeights:
    def test_defaults(self):
        w = RewardWeights()
        assert (w.w_f, w.w_cls, w.w_box, w.w_r, w.w_p, w.w_f1) == (0.5, 1.5, 1.5, 3.0, 1.0, 2.0)
        assert (w.w_obj_h, w.w_rel_h, w.alpha_obj, w.alpha_rel) == (1.0, 1.0, 2.0, 2.0)
        assert w.max_total == 9.5
        assert w.min_total == -2.0

    def test_presets(self):
        assert set(PRESETS) == {"base", "balance", "full"}
        assert RewardWeights.preset("full") == RewardWeights()
        balance = RewardWeights.preset("balance")
        assert balance.w_obj_h == balance.w_rel_h == 0.0
        assert balance.w_f1 == 2.0
        base = RewardWeights.preset("base")
        assert base.w_p == base.w_f1 == 0.0
        with pytest.raises(ConfigError, match="Unknown reward preset"):
            RewardWeights.preset("turbo")

    def test_overrides(self):
        w = RewardWeights().with_overrides({"w_r": "4"})
        assert w.w_r == 4.0
        with pytest.raises(ConfigError, match="Unknown reward weight"):
            RewardWeights().with_overrides({"w_zz": 1})
        with pytest.raises(ConfigError, match="numbers"):
            RewardWeights().with_overrides({"w_r": "lots"})

    def test_validation(self):
        with pytest.raises(ConfigError):
            RewardWeights(w_f=-1)
        with pytest.raises(ConfigError, match="finite"):
            RewardWeights().with_overrides({"w_r": float("nan")})
        with pytest.raises(ConfigError, match="finite"):
            RewardWeights(w_obj_h=float("inf"))
        with pytest.raises(ConfigError):
            RewardWeights(alpha_obj=0.5)


# ---------------------------------------------------------------------------
# Components
# ---------------------------------------------------------------------------

class TestComponents:
    def test_obj_cls_partial(self):
        gt = SceneGraph(objects=(
            SceneObject(0, "zebra", BoundingBox(0, 0, 100, 100)),
            SceneObject(1, "grass", BoundingBox(0, 200, 640, 480)),
        ))
        pred = SceneGraph(objects=gt.objects + (SceneObject(2, "tree", BoundingBox(500, 0, 600, 100)),))
        match = match_graphs(gt, pred)
        assert reward_obj_cls(match, 1.5) == pytest.approx(1.0)

    def test_obj_box_half_iou(self):
        gt = SceneGraph(objects=(SceneObject(0, "cup", BoundingBox(0, 0, 10, 10)),))
        pred = SceneGraph(objects=(SceneObject(0, "cup", BoundingBox(0, 0, 10, 20)),))
        match = match_graphs(gt, pred, MatchConfig(image_height=1e12))
        assert match.per_pair[0].iou == pytest.approx(0.5)
        assert reward_obj_box(match, RewardWeights()) == pytest.approx(1.5 * (0.5 + 1.0) / 2, abs=1e-9)

    def test_relation_terms(self):
        recall, precision, f1 = reward_relations(2, 4, 5, RewardWeights(), 1e-6)
        assert recall == pytest.approx(1.5)
        assert precision == pytest.approx(0.4)
        assert f1 == pytest.approx(2 * (4 / 9))

    def test_relation_terms_empty(self):
        assert reward_relations(0, 0, 0, RewardWeights(), 1e-6) == (0.0, 0.0, 0.0)

    def test_perfect_relation_terms_are_exact(self):
        w = RewardWeights()
        assert reward_relations(7, 7, 7, w, 1e-6) == (w.w_r, w.w_p, w.w_f1)
        # tiny but non-zero overlap keeps the harmonic mean
        _, _, f1 = reward_relations(1, 10 ** 6, 10 ** 6, w, 1e-6)
        assert f1 == pytest.approx(w.w_f1 * 1e-6)

    def test_penalties(self):
        p_obj, p_rel = hallucination_penalties(3, 2, 3, 4, RewardWeights(), 1e-6)
        assert p_obj == 0.0
        assert p_rel == pytest.approx(0.25)

    def test_penalties_zero_predictions(self):
        assert hallucination_penalties(0, 0, 0, 0, RewardWeights(), 1e-6) == (0.0, 0.0)


# ---------------------------------------------------------------------------
# End-to-end scoring
# ---------------------------------------------------------------------------

class TestScoreCompletion:
    def test_perfect_completion(self, zebra_graph):
        b = score_completion(zebra_graph, _answer(zebra_graph))
        assert b.valid_mask == 1
        assert b.total == 9.5
        assert (b.penalty_obj, b.penalty_rel) == (0.0, 0.0)
        assert (b.matched_objects, b.matched_relations) == (3, 2)

    def test_perfect_human_object_completion(self, ho_graph):
        b = score_completion(ho_graph, _answer(ho_graph))
        assert b.total == 9.5

    def test_missing_tags(self, zebra_graph):
        b = score_completion(zebra_graph, serialize_toon(zebra_graph).raw_text)
        assert b.valid_mask == 0
        assert b.total == 0.0
        assert b.diagnostics.has_answer_tags == 0
        assert b.diagnostics.num_pred_objs == 0

    def test_empty_valid_answer(self, zebra_graph):
        b = score_completion(zebra_graph, _answer(SceneGraph()))
        assert b.valid_mask == 1
        assert b.total == 0.5
        assert b.diagnostics.frac_no_rel == 1.0

    def test_invalid_graph_scores_zero_with_diagnostics(self, zebra_graph):
        text = serialize_toon(zebra_graph).raw_text.replace("1,on,2", "1,on,1")
        b = score_completion(zebra_graph, f"<answer>{text}</answer>")
        assert b.valid_mask == 0
        assert b.total == 0.0
        assert b.diagnostics.has_answer_tags == 1
        assert b.diagnostics.num_pred_objs == 3
        assert b.diagnostics.frac_invalid_rel == pytest.approx(0.5)

    def test_hallucinated_objects_penalized(self, zebra_graph):
        extra = SceneGraph(objects=zebra_graph.objects + (
            SceneObject(3, "lion", BoundingBox(0, 0, 50, 50)),
            SceneObject(4, "lion", BoundingBox(60, 0, 110, 50)),
            SceneObject(5, "lion", BoundingBox(120, 0, 170, 50)),
        ), relations=zebra_graph.relations)
        b = score_completion(zebra_graph, _answer(extra))
        assert b.penalty_obj == pytest.approx(0.25)
        assert b.total < 9.5

    def test_total_is_sum_of_terms(self, zebra_graph):
        pred = SceneGraph(objects=zebra_graph.objects[:2], relations=())
        b = score_outcome(zebra_graph, parse_toon(serialize_toon(pred).raw_text))
        expected = (b.format + b.obj_cls + b.obj_box + b.rel_recall + b.rel_precision + b.rel_f1
                    - b.penalty_obj - b.penalty_rel)
        assert b.total == expected

    def test_balance_preset_drops_penalties(self, zebra_graph):
        junk = SceneGraph(objects=(SceneObject(0, "lion", BoundingBox(0, 0, 50, 50)),))
        full = score_completion(zebra_graph, _answer(junk))
        balance = score_completion(zebra_graph, _answer(junk), RewardWeights.preset("balance"))
        assert full.penalty_obj == 1.0
        assert balance.penalty_obj == 0.0

    def test_human_object_schema_from_gt(self, ho_graph):
        b = score_completion(ho_graph, _answer(SceneGraph(Schema.HUMAN_OBJECT)))
        assert b.valid_mask == 1

    def test_dropped_relation_unmatched(self, ho_graph):
        partial = SceneGraph(Schema.HUMAN_OBJECT, ho_graph.objects, tuple(
            Relation(r.subject_id, r.predicate, r.object_id, r.group) for r in ho_graph.relations
            if r.predicate != "holding"
        ))
        b = score_completion(ho_graph, _answer(partial))
        assert b.matched_relations == 3

    def test_to_dict_flattens_diagnostics(self, zebra_graph):
        data = score_completion(zebra_graph, _answer(zebra_graph)).to_dict()
        assert data["total"] == 9.5
        assert data["has_answer_tags"] == 1
        assert "diagnostics" not in data


class TestScoreBatch:
    def test_matches_single_calls_in_order(self, zebra_graph, ho_graph):
        items = [
            (zebra_graph, _answer(zebra_graph)),
            (zebra_graph, "no answer"),
            (ho_graph, _answer(ho_graph)),
            (zebra_graph, _answer(SceneGraph())),
        ] * 5
        batch = score_batch(items, max_workers=4)
        assert [b.total for b in batch] == [score_completion(g, c).total for g, c in items]

    def test_empty(self):
        assert score_batch([]) == []
