"""Tests for the graph model, validation and vocabularies."""

import math

import pytest

from src.errors import ConfigError
from src.graph import (
    BoundingBox,
    Relation,
    RelationGroup,
    SceneGraph,
    SceneObject,
    Schema,
    ViolationCode,
    Vocabulary,
    graph_stats,
    load_vocabulary,
    round_half_away,
    validate_graph,
)


def _obj(i, label="zebra", box=(0, 0, 10, 10)):
    return SceneObject(i, label, BoundingBox(*box))


# ---------------------------------------------------------------------------
# Model
# ---------------------------------------------------------------------------

class TestModel:
    def test_objects_sorted_by_id(self):
        g = SceneGraph(objects=(_obj(2), _obj(0), _obj(1)))
        assert [o.id for o in g.objects] == [0, 1, 2]

    def test_frame_id_not_part_of_equality(self, zebra_graph):
        from dataclasses import replace
        assert replace(zebra_graph, frame_id="a") == replace(zebra_graph, frame_id="b")

    def test_round_half_away(self):
        assert round_half_away(2.5) == 3
        assert round_half_away(-2.5) == -3
        assert round_half_away(2.4999) == 2
        assert round_half_away(0.5) == 1

    def test_box_rounded(self):
        assert BoundingBox(0.5, 1.5, 9.49, 10.5).rounded() == (1, 2, 9, 11)

    def test_relation_key_qualified_by_group(self):
        assert Relation(0, "on", 1).key == "on"
        assert Relation(0, "holding", 1, RelationGroup.CONTACTING).key == "contacting:holding"

    def test_human_object_relations_canonical_order(self, ho_graph):
        order = [(r.object_id, r.group) for r in ho_graph.relations]
        assert order == [
            (2, RelationGroup.ATTENTION),
            (2, RelationGroup.SPATIAL),
            (1, RelationGroup.SPATIAL),
            (1, RelationGroup.CONTACTING),
        ]

    def test_human_is_first_object(self, ho_graph, zebra_graph):
        assert ho_graph.human.label == "person"
        assert zebra_graph.human is None

    def test_object_by_id(self, zebra_graph):
        assert zebra_graph.object_by_id(2).label == "grass"
        assert zebra_graph.object_by_id(7) is None


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

class TestValidation:
    def test_valid_graph(self, zebra_graph, ho_graph):
        assert validate_graph(zebra_graph).is_valid
        assert validate_graph(ho_graph).is_valid

    def test_empty_graph_is_valid(self):
        assert validate_graph(SceneGraph()).is_valid

    def test_duplicate_id(self):
        g = SceneGraph(objects=(_obj(0), _obj(0, "grass")))
        assert ViolationCode.DUPLICATE_ID in validate_graph(g).codes

    def test_negative_id(self):
        assert ViolationCode.NEGATIVE_ID in validate_graph(SceneGraph(objects=(_obj(-1),))).codes

    def test_dangling_reference(self):
        g = SceneGraph(objects=(_obj(0),), relations=(Relation(0, "on", 5),))
        assert ViolationCode.DANGLING_REFERENCE in validate_graph(g).codes

    def test_self_relation(self):
        g = SceneGraph(objects=(_obj(0),), relations=(Relation(0, "on", 0),))
        assert ViolationCode.SELF_RELATION in validate_graph(g).codes

    def test_duplicate_relation(self):
        g = SceneGraph(objects=(_obj(0), _obj(1)), relations=(Relation(0, "on", 1), Relation(0, "on", 1)))
        assert ViolationCode.DUPLICATE_RELATION in validate_graph(g).codes

    @pytest.mark.parametrize("label", ["zebra,striped", " zebra", "ze\tbra", "a\nb"])
    def test_delimiters_in_labels(self, label):
        assert ViolationCode.INVALID_TOKEN in validate_graph(SceneGraph(objects=(_obj(0, label),))).codes

    def test_label_with_inner_space_is_fine(self):
        assert validate_graph(SceneGraph(objects=(_obj(0, "traffic light"),))).is_valid

    def test_empty_label(self):
        assert ViolationCode.EMPTY_LABEL in validate_graph(SceneGraph(objects=(_obj(0, ""),))).codes

    def test_degenerate_and_non_finite_boxes(self):
        flipped = SceneGraph(objects=(_obj(0, box=(10, 0, 5, 10)),))
        nan = SceneGraph(objects=(_obj(0, box=(0, 0, math.nan, 10)),))
        assert ViolationCode.DEGENERATE_BOX in validate_graph(flipped).codes
        assert ViolationCode.NON_FINITE_BOX in validate_graph(nan).codes

    def test_zero_area_box_is_allowed(self):
        assert validate_graph(SceneGraph(objects=(_obj(0, box=(5, 5, 5, 10)),))).is_valid

    def test_human_object_needs_groups_and_human_subject(self, ho_graph):
        no_group = SceneGraph(Schema.HUMAN_OBJECT, ho_graph.objects, (Relation(0, "holding", 1),))
        wrong_subject = SceneGraph(
            Schema.HUMAN_OBJECT, ho_graph.objects, (Relation(1, "on", 2, RelationGroup.SPATIAL),),
        )
        assert ViolationCode.MISSING_GROUP in validate_graph(no_group).codes
        assert ViolationCode.HUMAN_SUBJECT in validate_graph(wrong_subject).codes

    def test_person_not_first(self):
        g = SceneGraph(Schema.HUMAN_OBJECT, (_obj(0, "cup"), _obj(1, "person")))
        assert ViolationCode.PERSON_NOT_FIRST in validate_graph(g).codes

    def test_group_outside_human_object_schema(self):
        g = SceneGraph(objects=(_obj(0), _obj(1)), relations=(Relation(0, "on", 1, RelationGroup.SPATIAL),))
        assert ViolationCode.UNEXPECTED_GROUP in validate_graph(g).codes

    def test_grouped_predicate_cannot_hold_value_separator(self, ho_graph):
        g = SceneGraph(
            Schema.HUMAN_OBJECT, ho_graph.objects, (Relation(0, "holding|touching", 1, RelationGroup.CONTACTING),),
        )
        assert ViolationCode.INVALID_TOKEN in validate_graph(g).codes


# ---------------------------------------------------------------------------
# Vocabulary
# ---------------------------------------------------------------------------

class TestVocabulary:
    def test_open_vocabulary_ignores_unknown_labels(self, zebra_graph):
        vocab = Vocabulary(object_labels=frozenset({"zebra"}), predicates=frozenset({"on"}))
        assert validate_graph(zebra_graph, vocab).is_valid

    def test_closed_vocabulary_flags_unknown_labels(self, zebra_graph):
        vocab = Vocabulary(object_labels=frozenset({"zebra"}), predicates=frozenset({"on"}))
        codes = validate_graph(zebra_graph, vocab, closed=True).codes
        assert ViolationCode.UNKNOWN_LABEL in codes
        assert ViolationCode.UNKNOWN_PREDICATE in codes

    def test_grouped_vocabulary_from_dict(self, ho_graph):
        vocab = Vocabulary.from_dict({
            "objects": ["person", "cup", "laptop"],
            "predicates": {
                "attention": ["looking_at"],
                "spatial": ["in_front_of"],
                "contacting": ["holding"],
            },
        })
        assert validate_graph(ho_graph, vocab, closed=True).is_valid

    def test_duplicate_entries_rejected(self):
        with pytest.raises(ConfigError, match="duplicate"):
            Vocabulary.from_dict({"objects": ["cup", "cup"], "predicates": ["on"]})

    def test_unknown_group_rejected(self):
        with pytest.raises(ConfigError, match="Unknown relation group"):
            Vocabulary.from_dict({"objects": ["cup"], "predicates": {"emotion": ["happy"]}})

    def test_from_graphs(self, zebra_graph, ho_graph):
        vocab = Vocabulary.from_graphs([zebra_graph, ho_graph])
        assert {"zebra", "grass", "person", "cup", "laptop"} == vocab.object_labels
        assert {"eating", "on"} == vocab.predicates
        assert vocab.group_predicates[RelationGroup.CONTACTING] == frozenset({"holding"})

    def test_load_vocabulary(self, tmp_path):
        path = tmp_path / "vocab.yml"
        path.write_text("objects: [zebra, grass]\npredicates: [on, eating]\n")
        vocab = load_vocabulary(str(path))
        assert vocab.allows_label("zebra")
        assert vocab.allows_predicate(Relation(0, "eating", 1))

    def test_unquoted_yes_no_words_stay_labels(self, tmp_path):
        path = tmp_path / "vocab.yml"
        path.write_text("objects: [zebra, no, off]\npredicates: [on, 'yes', eating]\n")
        vocab = load_vocabulary(str(path))
        assert vocab.object_labels == frozenset({"zebra", "no", "off"})
        assert vocab.predicates == frozenset({"on", "yes", "eating"})
        assert vocab.allows_predicate(Relation(0, "on", 1))

    def test_grouped_unquoted_on(self, tmp_path):
        path = tmp_path / "vocab.yml"
        path.write_text("objects: [person, cup]\npredicates:\n  spatial: [on, beside]\n")
        vocab = load_vocabulary(str(path))
        assert vocab.allows_predicate(Relation(0, "on", 1, RelationGroup.SPATIAL))

    @pytest.mark.parametrize("entry", [True, 3, None])
    def test_non_string_entries_rejected(self, entry):
        with pytest.raises(ConfigError, match="quote it"):
            Vocabulary.from_dict({"objects": ["cup"], "predicates": ["on", entry]})

    def test_true_still_needs_quotes(self, tmp_path):
        path = tmp_path / "vocab.yml"
        path.write_text("objects: [cup]\npredicates: [true]\n")
        with pytest.raises(ConfigError, match="quote it"):
            load_vocabulary(str(path))

    def test_load_missing_vocabulary(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_vocabulary(str(tmp_path / "nope.yml"))


class TestGraphStats:
    def test_counts(self, zebra_graph, ho_graph):
        stats = graph_stats(zebra_graph)
        assert (stats.num_objects, stats.num_relations) == (3, 2)
        assert stats.predicate_counts == {"eating": 1, "on": 1}
        assert graph_stats(ho_graph).predicate_counts["spatial:in_front_of"] == 2

    def test_zero_relation(self):
        assert graph_stats(SceneGraph(objects=(_obj(0),))).zero_relation
