"""
Reward weights.

Defaults are the active reward functions used for GRPO fine-tuning: format
0.5, object class 1.5, object box 1.5, relation recall 3.0, precision 1.0,
F1 2.0 and both hallucination penalties 1.0 with exponent 2. Each weight is
applied exactly once; the trainer combines terms with weight 1.
"""

import logging
import math
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Mapping

from src.errors import ConfigError

logger = logging.getLogger(__name__)

PRESETS = ("base", "balance", "full")


@dataclass(frozen=True)
class RewardWeights:
    w_f: float = 0.5
    w_cls: float = 1.5
    w_box: float = 1.5
    w_r: float = 3.0
    w_p: float = 1.0
    w_f1: float = 2.0
    w_obj_h: float = 1.0
    w_rel_h: float = 1.0
    alpha_obj: float = 2.0
    alpha_rel: float = 2.0
    lambda_iou: float = 1.0
    lambda_l1: float = 1.0

    def __post_init__(self) -> None:
        non_finite = [f.name for f in fields(self) if not math.isfinite(getattr(self, f.name))]
        if non_finite:
            raise ConfigError(f"Reward weights must be finite: {', '.join(non_finite)}")
        negative = [f.name for f in fields(self) if getattr(self, f.name) < 0]
        if negative:
            raise ConfigError(f"Reward weights must be non-negative: {', '.join(negative)}")
        if self.alpha_obj < 1 or self.alpha_rel < 1:
            raise ConfigError("Hallucination exponents alpha_obj and alpha_rel must be >= 1")
        if self.lambda_iou + self.lambda_l1 <= 0:
            raise ConfigError("lambda_iou + lambda_l1 must be positive")

    @property
    def max_total(self) -> float:
        return self.w_f + self.w_cls + self.w_box + self.w_r + self.w_p + self.w_f1

    @property
    def min_total(self) -> float:
        return -(self.w_obj_h + self.w_rel_h)

    def to_dict(self) -> dict[str, float]:
        return asdict(self)

    def with_overrides(self, overrides: Mapping[str, Any]) -> "RewardWeights":
        """Copy with some fields replaced; unknown names are a ConfigError."""
        known = {f.name for f in fields(self)}
        unknown = sorted(set(overrides) - known)
        if unknown:
            raise ConfigError(f"Unknown reward weight(s): {', '.join(unknown)}")
        try:
            values = {k: float(v) for k, v in overrides.items()}
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Reward weights must be numbers: {e}") from None
        return replace(self, **values)

    @classmethod
    def preset(cls, name: str) -> "RewardWeights":
        """
        Reward-group ablation presets.

        base:    format, object and recall terms only
        balance: base plus relation precision and F1
        full:    base, balance and hallucination penalties (the defaults)
        """
        full = cls()
        if name == "full":
            return full
        if name == "balance":
            return replace(full, w_obj_h=0.0, w_rel_h=0.0)
        if name == "base":
            return replace(full, w_p=0.0, w_f1=0.0, w_obj_h=0.0, w_rel_h=0.0)
        raise ConfigError(f"Unknown reward preset {name!r}; choose from {', '.join(PRESETS)}")
