"""
Seeded corruption of previous-frame graphs for the temporal RL protocol.

Applied in order: object dropout, label substitution, box jitter, relation
dropout. Relations left dangling by object dropout are removed and the
result is cleaned, so a valid input always gives a valid output. In the
human-object schema the human (first object) is never dropped or relabelled.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Iterable, Optional

import numpy as np

from src.dataset.cleaning import clean_graph
from src.graph.model import (
    HUMAN_LABEL,
    IMAGE_HEIGHT,
    IMAGE_WIDTH,
    BoundingBox,
    Schema,
    SceneGraph,
    SceneObject,
    round_half_away,
)
from src.graph.validation import validate_graph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CorruptionPolicy:
    object_dropout: float = 0.1
    relation_dropout: float = 0.2
    # Max offset per coordinate, as a fraction of the box side
    box_jitter: float = 0.05
    label_substitution: float = 0.05
    # Replacement labels; when empty, labels already present in the graph are used
    vocabulary: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for name in ("object_dropout", "relation_dropout", "box_jitter", "label_substitution"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        object.__setattr__(self, "vocabulary", tuple(self.vocabulary))

    @property
    def is_identity(self) -> bool:
        return not (self.object_dropout or self.relation_dropout or self.box_jitter or self.label_substitution)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["vocabulary"] = list(self.vocabulary)
        return data

    @classmethod
    def identity(cls) -> "CorruptionPolicy":
        return cls(0.0, 0.0, 0.0, 0.0)


def _jitter(box: BoundingBox, fraction: float, rng: np.random.Generator, width: float, height: float) -> BoundingBox:
    dx = rng.uniform(-fraction, fraction, size=2) * box.width
    dy = rng.uniform(-fraction, fraction, size=2) * box.height
    x1 = round_half_away(min(max(box.x1 + dx[0], 0.0), width))
    x2 = round_half_away(min(max(box.x2 + dx[1], 0.0), width))
    y1 = round_half_away(min(max(box.y1 + dy[0], 0.0), height))
    y2 = round_half_away(min(max(box.y2 + dy[1], 0.0), height))
    if x2 <= x1 or y2 <= y1:
        return box
    return BoundingBox(float(x1), float(y1), float(x2), float(y2))


def _substitute(label: str, candidates: list[str], rng: np.random.Generator) -> str:
    options = [c for c in candidates if c != label]
    if not options:
        return label
    return options[int(rng.integers(len(options)))]


def corrupt_graph(
    g: SceneGraph,
    policy: Optional[CorruptionPolicy] = None,
    seed: int = 0,
    image_size: tuple[float, float] = (IMAGE_WIDTH, IMAGE_HEIGHT),
) -> SceneGraph:
    """
    Corrupt a valid graph deterministically for a given seed.

    A policy with every probability at 0 returns the graph unchanged.
    """
    policy = policy or CorruptionPolicy()
    if policy.is_identity:
        return g
    rng = np.random.default_rng(seed)
    width, height = image_size
    human_first = g.schema is Schema.HUMAN_OBJECT

    pool: Iterable[str] = policy.vocabulary or sorted({o.label for o in g.objects})
    candidates = sorted(set(pool))
    if human_first:
        candidates = [c for c in candidates if c != HUMAN_LABEL]

    objects: list[SceneObject] = []
    for pos, obj in enumerate(g.objects):
        protected = human_first and pos == 0
        if not protected and rng.random() < policy.object_dropout:
            continue
        label = obj.label
        if not protected and rng.random() < policy.label_substitution:
            label = _substitute(label, candidates, rng)
        box = _jitter(obj.box, policy.box_jitter, rng, width, height) if policy.box_jitter > 0 else obj.box
        objects.append(SceneObject(obj.id, label, box))

    kept_ids = {o.id for o in objects}
    relations = tuple(
        rel for rel in g.relations
        if rel.subject_id in kept_ids and rel.object_id in kept_ids and not rng.random() < policy.relation_dropout
    )
    corrupted = clean_graph(SceneGraph(schema=g.schema, objects=tuple(objects), relations=relations, frame_id=g.frame_id))

    report = validate_graph(corrupted)
    if not report.is_valid:
        logger.warning("Corrupted graph %s failed validation (%s)", g.frame_id, ", ".join(c.value for c in report.codes))
    logger.debug(
        "Corrupted %s (seed %d): objects %d -> %d, relations %d -> %d",
        g.frame_id or "graph", seed, len(g.objects), len(corrupted.objects),
        len(g.relations), len(corrupted.relations),
    )
    return corrupted
