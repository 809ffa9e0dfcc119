"""
Equivalence judges for soft evaluation.

A judge is consulted only for disputed pairs: IoU-aligned objects whose labels
differ, and endpoint-aligned relations whose predicates differ. Everything
else is decided lexically by the evaluator.
"""

import hashlib
import logging
import threading
from pathlib import Path
from typing import Any, Callable, Iterable, Protocol, runtime_checkable

import yaml

from src.errors import ConfigError, JudgeError
from src.graph.vocabulary import load_label_yaml, require_names

logger = logging.getLogger(__name__)


@runtime_checkable
class JudgeClient(Protocol):
    def judge_objects(self, label_a: str, label_b: str, scene_context: str) -> bool:
        ...

    def judge_predicates(self, pred_a: str, pred_b: str, subject: str, obj: str, scene_context: str) -> bool:
        ...


def _classes(groups: Iterable[Iterable[str]], what: str) -> dict[str, int]:
    index: dict[str, int] = {}
    for n, group in enumerate(groups):
        if isinstance(group, str) or not isinstance(group, (list, tuple, set)):
            raise ConfigError(f"{what} synonym groups must be lists of names")
        for name in require_names(group, f"{what.capitalize()} synonym group"):
            key = name.strip().lower()
            if key in index and index[key] != n:
                raise ConfigError(f"'{name}' appears in more than one {what} synonym group")
            index[key] = n
    return index


class SynonymJudge:
    """
    Deterministic judge backed by synonym tables.

    Two names are equivalent when they are equal (case-insensitive) or listed
    in the same group. Reflexive and symmetric; scene context is ignored.
    """

    def __init__(
        self,
        object_groups: Iterable[Iterable[str]] = (),
        predicate_groups: Iterable[Iterable[str]] = (),
    ):
        self._objects = _classes(object_groups, "object")
        self._predicates = _classes(predicate_groups, "predicate")

    @property
    def num_object_names(self) -> int:
        return len(self._objects)

    @property
    def num_predicate_names(self) -> int:
        return len(self._predicates)

    @staticmethod
    def _same(table: dict[str, int], a: str, b: str) -> bool:
        ka, kb = a.strip().lower(), b.strip().lower()
        if ka == kb:
            return True
        return ka in table and table[ka] == table.get(kb)

    def judge_objects(self, label_a: str, label_b: str, scene_context: str) -> bool:
        return self._same(self._objects, label_a, label_b)

    def judge_predicates(self, pred_a: str, pred_b: str, subject: str, obj: str, scene_context: str) -> bool:
        return self._same(self._predicates, pred_a, pred_b)

    @classmethod
    def from_dict(cls, data: Any) -> "SynonymJudge":
        if not isinstance(data, dict):
            raise ConfigError("Synonym table must be a mapping with 'objects' and/or 'predicates'")
        return cls(data.get("objects") or (), data.get("predicates") or ())


def load_synonym_judge(path: str) -> SynonymJudge:
    """Load a SynonymJudge from a YAML (or JSON) synonym table file."""
    try:
        data = load_label_yaml(Path(path).read_text(encoding="utf-8"))
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid synonym table {path}: {e}") from None
    judge = SynonymJudge.from_dict(data)
    logger.info(
        "Loaded synonym table %s: %d object name(s), %d predicate name(s)",
        path, judge.num_object_names, judge.num_predicate_names,
    )
    return judge


def context_digest(scene_context: str) -> str:
    return hashlib.sha256(scene_context.encode("utf-8")).hexdigest()[:16]


class CachedJudge:
    """
    Thread-safe memo around another judge.

    Verdicts are keyed by the disputed pair and a digest of the scene
    context. Failures are not cached; they are tallied and re-raised as
    JudgeError so the caller can fall back to a strict non-match.
    """

    def __init__(self, inner: JudgeClient):
        self.inner = inner
        self._cache: dict[tuple[str, ...], bool] = {}
        self._lock = threading.Lock()
        self.failures = 0
        self.calls = 0

    def _lookup(self, key: tuple[str, ...], ask: Callable[[], bool]) -> bool:
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        try:
            verdict = bool(ask())
        except JudgeError:
            with self._lock:
                self.failures += 1
            raise
        except Exception as e:
            with self._lock:
                self.failures += 1
            logger.warning("Judge call failed: %s", e)
            raise JudgeError(str(e)) from e
        with self._lock:
            self.calls += 1
            self._cache[key] = verdict
        return verdict

    def judge_objects(self, label_a: str, label_b: str, scene_context: str) -> bool:
        key = ("obj", label_a, label_b, context_digest(scene_context))
        return self._lookup(key, lambda: self.inner.judge_objects(label_a, label_b, scene_context))

    def judge_predicates(self, pred_a: str, pred_b: str, subject: str, obj: str, scene_context: str) -> bool:
        key = ("pred", pred_a, pred_b, subject, obj, context_digest(scene_context))
        return self._lookup(
            key, lambda: self.inner.judge_predicates(pred_a, pred_b, subject, obj, scene_context),
        )

    def __len__(self) -> int:
        return len(self._cache)
