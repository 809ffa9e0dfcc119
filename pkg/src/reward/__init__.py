from .engine import (
    RewardBreakdown,
    RewardDiagnostics,
    hallucination_penalties,
    reward_diagnostics,
    reward_obj_box,
    reward_obj_cls,
    reward_relations,
    score_batch,
    score_completion,
    score_outcome,
)
from .weights import PRESETS, RewardWeights

__all__ = [
    "RewardBreakdown",
    "RewardDiagnostics",
    "hallucination_penalties",
    "reward_diagnostics",
    "reward_obj_box",
    "reward_obj_cls",
    "reward_relations",
    "score_batch",
    "score_completion",
    "score_outcome",
    "PRESETS",
    "RewardWeights",
]
