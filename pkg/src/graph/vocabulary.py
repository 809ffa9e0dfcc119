"""
Dataset vocabularies: the closed sets of object categories and predicates.

Vocabulary files are YAML (or JSON, which YAML accepts):

    objects: [person, zebra, grass]
    predicates: [on, beside, eating]

Human-object vocabularies list predicates per relation group instead:

    objects: [person, cup, table]
    predicates:
      attention: [looking_at, not_looking_at]
      spatial: [in_front_of, beside]
      contacting: [holding, touching]
"""

import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping

import yaml

from src.errors import ConfigError
from src.graph.model import Relation, RelationGroup, SceneGraph

logger = logging.getLogger(__name__)

_BOOL_TAG = "tag:yaml.org,2002:bool"


class LabelLoader(yaml.SafeLoader):
    """
    SafeLoader that keeps on/off/yes/no as strings.

    Only true/false (any case) still load as booleans, as in YAML 1.2.
    """


LabelLoader.yaml_implicit_resolvers = {
    first: [(tag, regexp) for tag, regexp in resolvers if tag != _BOOL_TAG]
    for first, resolvers in yaml.SafeLoader.yaml_implicit_resolvers.items()
}
LabelLoader.add_implicit_resolver(
    _BOOL_TAG, re.compile(r"^(?:true|True|TRUE|false|False|FALSE)$"), list("tTfF"),
)


def load_label_yaml(stream: Any) -> Any:
    """Decode a vocabulary or synonym file; label words never turn into booleans."""
    return yaml.load(stream, Loader=LabelLoader)


def require_names(values: Iterable[Any], what: str) -> list[str]:
    """The entries as strings; anything else (booleans, numbers) must be quoted in the file."""
    names = list(values)
    for v in names:
        if not isinstance(v, str):
            raise ConfigError(f"{what} entries must be strings, got {v!r}; quote it in the file")
    return names


def _unique_set(values: Any, what: str) -> frozenset[str]:
    if not isinstance(values, list) or not values:
        raise ConfigError(f"Vocabulary '{what}' must be a non-empty list")
    items = require_names(values, f"Vocabulary '{what}'")
    dupes = sorted(v for v, n in Counter(items).items() if n > 1)
    if dupes:
        raise ConfigError(f"Vocabulary '{what}' has duplicate entries: {', '.join(dupes)}")
    return frozenset(items)


@dataclass(frozen=True)
class Vocabulary:
    """Object categories and predicates (per group for the human-object schema)."""
    object_labels: frozenset[str]
    predicates: frozenset[str] = frozenset()
    group_predicates: Mapping[RelationGroup, frozenset[str]] = field(default_factory=dict)

    def allows_label(self, label: str) -> bool:
        return label in self.object_labels

    def allows_predicate(self, relation: Relation) -> bool:
        if relation.group is not None and self.group_predicates:
            return relation.predicate in self.group_predicates.get(relation.group, frozenset())
        return relation.predicate in self.predicates

    @property
    def all_predicates(self) -> frozenset[str]:
        merged = set(self.predicates)
        for preds in self.group_predicates.values():
            merged |= preds
        return frozenset(merged)

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any]) -> "Vocabulary":
        objects = _unique_set(raw.get("objects"), "objects")
        predicates_raw = raw.get("predicates")
        if isinstance(predicates_raw, dict):
            groups: dict[RelationGroup, frozenset[str]] = {}
            for name, values in predicates_raw.items():
                try:
                    group = RelationGroup(name)
                except ValueError:
                    raise ConfigError(f"Unknown relation group in vocabulary: {name}") from None
                groups[group] = _unique_set(values, f"predicates.{name}")
            return cls(object_labels=objects, group_predicates=groups)
        return cls(object_labels=objects, predicates=_unique_set(predicates_raw, "predicates"))

    @classmethod
    def from_graphs(cls, graphs: Iterable[SceneGraph]) -> "Vocabulary":
        """Collect the vocabulary actually used by a set of graphs."""
        labels: set[str] = set()
        predicates: set[str] = set()
        groups: dict[RelationGroup, set[str]] = {}
        for g in graphs:
            labels.update(o.label for o in g.objects)
            for rel in g.relations:
                if rel.group is None:
                    predicates.add(rel.predicate)
                else:
                    groups.setdefault(rel.group, set()).add(rel.predicate)
        return cls(
            object_labels=frozenset(labels),
            predicates=frozenset(predicates),
            group_predicates={k: frozenset(v) for k, v in groups.items()},
        )


def load_vocabulary(path: str) -> Vocabulary:
    """Load a vocabulary file (YAML or JSON)."""
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"Vocabulary file not found: {path}")
    try:
        with open(p, "r", encoding="utf-8") as f:
            raw = load_label_yaml(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid vocabulary file {path}: {e}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"Vocabulary file is not a mapping: {path}")
    vocab = Vocabulary.from_dict(raw)
    logger.info(
        "Loaded vocabulary from %s: %d object label(s), %d predicate(s)",
        path, len(vocab.object_labels), len(vocab.all_predicates),
    )
    return vocab
