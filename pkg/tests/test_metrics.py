"""Tests for strict and soft evaluation, aggregation and SGDET@K."""

import random
from dataclasses import replace

import pytest

from src.errors import JudgeError
from src.graph import BoundingBox, Relation, SceneGraph, SceneObject
from src.llm import SynonymJudge
from src.matching import MatchConfig
from src.metrics import (
    EvalMode,
    PrecisionMode,
    SampleMetrics,
    Triplet,
    aggregate,
    aggregate_sgdet,
    apply_constraint,
    evaluate_sample_soft,
    evaluate_sample_strict,
    evaluate_samples,
    evaluate_sgdet,
    format_metric,
    format_percent,
    triplets_from_graph,
)
from src.toon import ParseOutcome
from tests.helpers import perturbed_graph, random_graph

SYNONYMS = SynonymJudge(
    object_groups=[["zebra", "grass"], ["car", "dog"], ["person", "man"]],
    predicate_groups=[["on", "parked-on"], ["near", "beside"]],
)


def _ok(g):
    return ParseOutcome(graph=g, valid=1)


def _line_of_objects(labels):
    """Disjoint boxes along the x axis so alignment is the identity."""
    return tuple(
        SceneObject(i, label, BoundingBox(100 * i, 0, 100 * i + 50, 50)) for i, label in enumerate(labels)
    )


class _AlwaysNo:
    def judge_objects(self, label_a, label_b, scene_context):
        return False

    def judge_predicates(self, pred_a, pred_b, subject, obj, scene_context):
        return False


class _Broken:
    def judge_objects(self, label_a, label_b, scene_context):
        raise JudgeError("judge offline")

    def judge_predicates(self, pred_a, pred_b, subject, obj, scene_context):
        raise JudgeError("judge offline")


# ---------------------------------------------------------------------------
# Strict
# ---------------------------------------------------------------------------

class TestStrict:
    def test_identical_prediction_scores_one(self, zebra_graph):
        m = evaluate_sample_strict(zebra_graph, _ok(zebra_graph))
        assert (m.obj_p, m.obj_r, m.obj_f1, m.rel_p, m.rel_r, m.rel_f1) == (1.0,) * 6
        assert not m.failed

    def test_failed_prediction(self, zebra_graph):
        m = evaluate_sample_strict(zebra_graph, ParseOutcome(graph=None, valid=0))
        assert m.failed
        assert (m.obj_f1, m.rel_f1) == (0.0, 0.0)
        assert (m.obj_fn, m.rel_fn) == (3, 2)

    def test_invalid_graph_counts_as_failed(self, zebra_graph):
        m = evaluate_sample_strict(zebra_graph, ParseOutcome(graph=zebra_graph, valid=0))
        assert m.failed

    def test_partial_relations(self):
        objects = _line_of_objects(["dog", "table", "cup", "chair", "lamp"])
        gt = SceneGraph(objects=objects, relations=(
            Relation(0, "on", 1), Relation(1, "on", 2), Relation(2, "near", 3), Relation(3, "near", 4),
        ))
        pred = SceneGraph(objects=objects, relations=(
            Relation(0, "on", 1), Relation(1, "on", 2), Relation(0, "near", 2),
            Relation(4, "on", 3), Relation(1, "beside", 4),
        ))
        m = evaluate_sample_strict(gt, _ok(pred))
        assert m.rel_tp == 2
        assert m.rel_p == pytest.approx(0.4)
        assert m.rel_r == pytest.approx(0.5)
        assert m.rel_f1 == pytest.approx(0.4444, abs=1e-4)
        assert m.obj_f1 == 1.0

    def test_label_mismatch_blocks_object_and_relation(self, zebra_graph):
        pred = SceneGraph(
            objects=tuple(SceneObject(o.id, "horse" if o.id == 0 else o.label, o.box) for o in zebra_graph.objects),
            relations=zebra_graph.relations,
        )
        m = evaluate_sample_strict(zebra_graph, _ok(pred))
        assert m.obj_tp == 2
        assert m.rel_tp == 1

    def test_iou_threshold_respected(self):
        gt = SceneGraph(objects=(SceneObject(0, "cup", BoundingBox(0, 0, 10, 10)),))
        pred = SceneGraph(objects=(SceneObject(0, "cup", BoundingBox(5, 0, 15, 10)),))
        assert evaluate_sample_strict(gt, _ok(pred)).obj_tp == 0
        assert evaluate_sample_strict(gt, _ok(pred), MatchConfig(iou_threshold=0.3)).obj_tp == 1

    def test_empty_graphs_score_zero_not_nan(self):
        m = evaluate_sample_strict(SceneGraph(), _ok(SceneGraph()))
        assert (m.obj_p, m.obj_r, m.obj_f1, m.rel_f1) == (0.0, 0.0, 0.0, 0.0)

    def test_count_identities(self):
        rng = random.Random(31)
        for _ in range(300):
            gt = random_graph(rng, 0, 6, 0, 6)
            pred = perturbed_graph(rng, gt)
            m = evaluate_sample_strict(gt, _ok(pred))
            assert m.obj_tp + m.obj_fn == len(gt.objects)
            assert m.obj_tp + m.obj_fp == len(pred.objects)
            assert m.rel_tp + m.rel_fn == len(gt.relations)
            assert m.rel_tp + m.rel_fp == len(pred.relations)
            for value in (m.obj_p, m.obj_r, m.obj_f1, m.rel_p, m.rel_r, m.rel_f1):
                assert 0.0 <= value <= 1.0


# ---------------------------------------------------------------------------
# Soft
# ---------------------------------------------------------------------------

def _rider(person_label, predicate):
    objects = (
        SceneObject(0, person_label, BoundingBox(0, 0, 100, 200)),
        SceneObject(1, "horse", BoundingBox(0, 150, 300, 400)),
    )
    return SceneGraph(objects=objects, relations=(Relation(0, predicate, 1),))


class TestSoft:
    def test_requires_judge(self, zebra_graph):
        with pytest.raises(ValueError, match="judge"):
            evaluate_sample_soft(zebra_graph, _ok(zebra_graph))

    def test_synonym_object_counts(self):
        gt, pred = _rider("person", "riding"), _rider("man", "riding")
        strict = evaluate_sample_strict(gt, _ok(pred))
        soft = evaluate_sample_soft(gt, _ok(pred), judge=SYNONYMS)
        assert (strict.obj_tp, strict.rel_tp) == (1, 0)
        assert (soft.obj_tp, soft.rel_tp) == (2, 1)

    def test_synonym_predicate_counts(self):
        gt, pred = _rider("person", "on"), _rider("person", "parked-on")
        assert evaluate_sample_strict(gt, _ok(pred)).rel_tp == 0
        assert evaluate_sample_soft(gt, _ok(pred), judge=SYNONYMS).rel_tp == 1

    def test_rejecting_judge_equals_strict(self):
        rng = random.Random(8)
        for _ in range(200):
            gt = random_graph(rng, 0, 6, 0, 6)
            pred = _ok(perturbed_graph(rng, gt))
            assert evaluate_sample_soft(gt, pred, judge=_AlwaysNo()) == evaluate_sample_strict(gt, pred)

    def test_soft_never_below_strict(self):
        rng = random.Random(13)
        for _ in range(300):
            gt = random_graph(rng, 0, 6, 0, 6)
            pred = _ok(perturbed_graph(rng, gt))
            strict = evaluate_sample_strict(gt, pred)
            soft = evaluate_sample_soft(gt, pred, judge=SYNONYMS)
            assert soft.obj_tp >= strict.obj_tp
            assert soft.rel_tp >= strict.rel_tp

    def test_judge_failure_scores_non_match(self):
        gt, pred = _rider("person", "riding"), _rider("man", "riding")
        soft = evaluate_sample_soft(gt, _ok(pred), judge=_Broken())
        assert soft.judge_failures == 1
        assert (soft.obj_tp, soft.rel_tp) == (1, 0)

    def test_failed_prediction_skips_judge(self, zebra_graph):
        m = evaluate_sample_soft(zebra_graph, ParseOutcome(graph=None, valid=0), judge=_Broken())
        assert m.failed
        assert m.judge_failures == 0


class TestEvaluateSamples:
    def test_strict_in_order(self, zebra_graph, ho_graph):
        gts = [zebra_graph, ho_graph, zebra_graph]
        preds = [_ok(zebra_graph), ParseOutcome(graph=None, valid=0), _ok(SceneGraph())]
        results = evaluate_samples(gts, preds)
        assert [r.failed for r in results] == [False, True, False]
        assert results[0].obj_f1 == 1.0
        assert results[2].obj_r == 0.0

    def test_soft_matches_per_sample(self):
        rng = random.Random(21)
        gts = [random_graph(rng, 1, 6, 0, 6) for _ in range(40)]
        preds = [_ok(perturbed_graph(rng, g)) for g in gts]
        batch = evaluate_samples(gts, preds, mode=EvalMode.SOFT, judge=SYNONYMS, max_in_flight=4)
        assert batch == [evaluate_sample_soft(g, p, judge=SYNONYMS) for g, p in zip(gts, preds)]

    def test_length_mismatch(self, zebra_graph):
        with pytest.raises(ValueError, match="prediction"):
            evaluate_samples([zebra_graph], [])

    def test_soft_needs_judge(self, zebra_graph):
        with pytest.raises(ValueError, match="judge"):
            evaluate_samples([zebra_graph], [_ok(zebra_graph)], mode=EvalMode.SOFT)

    def test_max_in_flight_validated(self, zebra_graph):
        with pytest.raises(ValueError, match="max_in_flight"):
            evaluate_samples([zebra_graph], [_ok(zebra_graph)], mode=EvalMode.SOFT, judge=SYNONYMS, max_in_flight=0)


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------

def _sample(obj_f1, rel_f1, failed=False):
    return SampleMetrics(
        obj_p=obj_f1, obj_r=obj_f1, obj_f1=obj_f1, rel_p=rel_f1, rel_r=rel_f1, rel_f1=rel_f1,
        obj_tp=0, obj_fp=0, obj_fn=0, rel_tp=0, rel_fp=0, rel_fn=0, failed=failed,
    )


class TestAggregate:
    def test_macro_average(self, zebra_graph):
        perfect = evaluate_sample_strict(zebra_graph, _ok(zebra_graph))
        empty = evaluate_sample_strict(zebra_graph, _ok(SceneGraph()))
        report = aggregate([perfect, empty])
        assert report.obj_f1 == 0.5
        assert report.rel_f1 == 0.5
        assert report.sgg_score == 0.5
        assert report.failure_rate == 0.0

    def test_sgg_score_rounding(self):
        report = aggregate([_sample(0.630, 0.253)])
        assert report.sgg_score == pytest.approx(0.4415)
        assert format_metric(report.sgg_score) == "0.442"

    @pytest.mark.parametrize("obj_f1,rel_f1,expected", [
        (0.630, 0.253, 0.442),
        (0.062, 0.008, 0.035),
        (0.080, 0.024, 0.052),
        (0.186, 0.038, 0.112),
        (0.292, 0.117, 0.204),
        (0.477, 0.158, 0.318),
        (0.126, 0.011, 0.069),
    ])
    def test_sgg_is_mean_of_f1_scores(self, obj_f1, rel_f1, expected):
        assert aggregate([_sample(obj_f1, rel_f1)]).sgg_score == pytest.approx(expected, abs=1e-3)

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            aggregate([])

    def test_failed_samples(self, zebra_graph):
        samples = [_sample(1.0, 1.0), SampleMetrics.failed_sample(zebra_graph)]
        included = aggregate(samples)
        excluded = aggregate(samples, include_failed=False)
        assert included.obj_f1 == 0.5
        assert excluded.obj_f1 == 1.0
        assert included.failure_rate == excluded.failure_rate == 0.5
        assert excluded.num_failed == 1

    def test_all_failed_and_excluded(self, zebra_graph):
        report = aggregate([SampleMetrics.failed_sample(zebra_graph)], include_failed=False)
        assert report.sgg_score == 0.0
        assert report.failure_rate == 1.0

    def test_permutation_invariant(self):
        rng = random.Random(4)
        samples = [_sample(rng.random(), rng.random(), rng.random() < 0.2) for _ in range(50)]
        shuffled = samples[:]
        rng.shuffle(shuffled)
        assert aggregate(samples) == aggregate(shuffled)

    def test_to_dict(self):
        data = aggregate([_sample(1.0, 0.0)], mode=EvalMode.SOFT).to_dict()
        assert data["mode"] == "soft"
        assert data["sgg_score"] == 0.5

    def test_formatting(self):
        assert format_metric(0.4415) == "0.442"
        assert format_metric(1.0) == "1.000"
        assert format_percent(0.0) == "0.00%"
        assert format_percent(0.125) == "12.50%"


# ---------------------------------------------------------------------------
# SGDET@K
# ---------------------------------------------------------------------------

def _triplets(n, predicate="on"):
    return [
        Triplet(
            "person", BoundingBox(60 * i, 0, 60 * i + 40, 40), predicate,
            "chair", BoundingBox(60 * i, 100, 60 * i + 40, 140), 2 * i, 2 * i + 1,
        )
        for i in range(n)
    ]


class TestSgdet:
    def test_half_recall_at_ten(self):
        gt = _triplets(10)
        r = evaluate_sgdet(gt, gt[:5], [10])[10]
        assert (r.tp, r.num_pred) == (5, 5)
        assert r.recall == 0.5
        assert r.precision == 1.0
        assert r.f1 == pytest.approx(2 / 3)

    def test_precision_over_k(self):
        gt = _triplets(10)
        r = evaluate_sgdet(gt, gt[:5], [10], precision_mode=PrecisionMode.K)[10]
        assert r.precision == 0.5

    def test_short_prediction_list_saturates(self):
        gt = _triplets(12)
        results = evaluate_sgdet(gt, gt[:8], [20, 50])
        assert replace(results[50], k=20) == results[20]

    def test_constraint_keeps_first_ranked(self):
        gt = _triplets(1, "on")
        wrong_first = _triplets(1, "under") + gt
        assert apply_constraint(wrong_first) == wrong_first[:1]
        assert evaluate_sgdet(gt, wrong_first, [10])[10].tp == 0
        assert evaluate_sgdet(gt, gt + _triplets(1, "under"), [10])[10].tp == 1

    def test_constraint_without_ids_uses_labels_and_boxes(self):
        t = _triplets(1)[0]
        anonymous = Triplet(t.subject_label, t.subject_box, "near", t.object_label, t.object_box)
        other = Triplet(t.subject_label, t.subject_box, "on", t.object_label, t.object_box)
        assert apply_constraint([anonymous, other]) == [anonymous]

    def test_one_to_one(self):
        gt = _triplets(1)
        assert evaluate_sgdet(gt, _triplets(1) * 3, [10])[10].tp == 1

    @pytest.mark.parametrize("k", [0, -5])
    def test_non_positive_k(self, k):
        with pytest.raises(ValueError):
            evaluate_sgdet(_triplets(2), _triplets(2), [10, k])

    def test_recall_non_decreasing_in_k(self):
        rng = random.Random(17)
        gt = _triplets(30)
        for _ in range(50):
            pred = [t if rng.random() < 0.5 else Triplet(
                t.subject_label, t.subject_box, "under", t.object_label, t.object_box,
            ) for t in rng.sample(gt, 25)]
            results = evaluate_sgdet(gt, pred, [5, 10, 20, 50])
            recalls = [results[k].recall for k in (5, 10, 20, 50)]
            assert recalls == sorted(recalls)

    def test_empty_sides(self):
        r = evaluate_sgdet([], _triplets(3), [10])[10]
        assert (r.recall, r.precision) == (0.0, 0.0)
        r = evaluate_sgdet(_triplets(3), [], [10])[10]
        assert (r.recall, r.precision, r.num_pred) == (0.0, 0.0, 0)

    def test_triplets_from_graph(self, zebra_graph, ho_graph):
        triplets = triplets_from_graph(zebra_graph)
        assert [(t.subject_label, t.predicate, t.object_label) for t in triplets] == [
            ("zebra", "eating", "grass"), ("zebra", "on", "grass"),
        ]
        assert triplets_from_graph(ho_graph)[0].predicate == "attention:looking_at"

    def test_graph_against_itself(self, zebra_graph):
        triplets = triplets_from_graph(zebra_graph)
        r = evaluate_sgdet(triplets, triplets, [10])[10]
        assert (r.recall, r.precision) == (1.0, 1.0)

    def test_aggregate(self):
        gt = _triplets(10)
        per_sample = [evaluate_sgdet(gt, gt, [10]), evaluate_sgdet(gt, [], [10])]
        mean = aggregate_sgdet(per_sample)[10]
        assert mean.recall == 0.5
        assert mean.tp == 10
        with pytest.raises(ValueError):
            aggregate_sgdet([])
