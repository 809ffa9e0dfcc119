"""
Previous-frame context for video prompts.

Each frame of a video is paired with the scene graph of the previous frame,
taken from one of three sources:

    gt          previous ground truth (oracle diagnostic)
    generated   the model's own prediction for the previous frame
    corrupted   corrupt_graph of the previous ground truth (RL training)

The first frame of a video, and any record without a video id, gets None.
"""

import logging
import zlib
from enum import Enum
from typing import Mapping, Optional, Sequence

from src.dataset.corruption import CorruptionPolicy, corrupt_graph
from src.dataset.records import Record
from src.graph.model import SceneGraph

logger = logging.getLogger(__name__)


class ContextProtocol(Enum):
    GT = "gt"
    GENERATED = "generated"
    CORRUPTED = "corrupted"


def frame_seed(sample_id: str, seed: int) -> int:
    """Per-frame corruption seed, stable across runs and processes."""
    return zlib.crc32(sample_id.encode("utf-8")) ^ seed


def previous_context(
    records: Sequence[Record],
    protocol: ContextProtocol = ContextProtocol.GT,
    predictions: Optional[Mapping[str, SceneGraph]] = None,
    policy: Optional[CorruptionPolicy] = None,
    seed: int = 0,
) -> list[tuple[Record, Optional[SceneGraph]]]:
    """
    Pair every record with the previous-frame graph for its prompt.

    Args:
        records: Frames grouped by video, index-ordered.
        protocol: Where the previous graph comes from.
        predictions: Sample id -> predicted graph (required for 'generated').
        policy: Corruption policy for 'corrupted' (defaults apply if None).
        seed: Base seed combined with each previous frame's sample id.
    """
    if protocol is ContextProtocol.GENERATED and predictions is None:
        raise ValueError("The 'generated' protocol needs predictions for previous frames")

    out: list[tuple[Record, Optional[SceneGraph]]] = []
    previous: Optional[Record] = None
    missing = 0
    for rec in records:
        context: Optional[SceneGraph] = None
        if rec.video_id is not None and previous is not None and previous.video_id == rec.video_id:
            if protocol is ContextProtocol.GT:
                context = previous.graph
            elif protocol is ContextProtocol.GENERATED:
                assert predictions is not None
                context = predictions.get(previous.sample_id)
                if context is None:
                    missing += 1
            else:
                context = corrupt_graph(previous.graph, policy, frame_seed(previous.sample_id, seed))
        out.append((rec, context))
        previous = rec

    if missing:
        logger.warning("%d frame(s) have no prediction for their previous frame", missing)
    logger.info("Built %s previous-frame context for %d record(s)", protocol.value, len(out))
    return out
