"""
Wire protocol of the scoring service: one UTF-8 JSON object per line.

Request:

    {"id": "rollout-17", "ground_truth": {"objects": [...], "relations": [...]},
     "completion": "<think>...</think><answer>...</answer>",
     "schema": "object-relation", "weights": {"w_r": 2.0}, "match": {"iou_threshold": 0.5}}

ground_truth (canonical JSON graph) and ground_truth_toon (TOON text) are
mutually exclusive; exactly one is required. schema, weights and match are
optional per-request overrides of the service defaults.

Response: the request id, the protocol version, and either every
RewardBreakdown field flattened (diagnostics included) or an error object:

    {"id": "rollout-17", "version": "1", "total": 9.5, "valid_mask": 1, ...}
    {"version": "1", "error": {"code": "bad-json", "message": "..."}}

handle_line never raises; every line gets exactly one response.
"""

import json
import logging
from dataclasses import dataclass, field, replace
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, FiniteFloat, ValidationError, model_validator

from src.errors import ConfigError
from src.graph.model import Schema
from src.matching.matcher import MatchConfig
from src.reward.engine import score_completion
from src.reward.weights import RewardWeights
from src.toon.json_format import outcome_from_dict
from src.toon.toon_format import parse_toon

logger = logging.getLogger(__name__)

PROTOCOL_VERSION = "1"

ERROR_BAD_JSON = "bad-json"
ERROR_BAD_REQUEST = "bad-request"
ERROR_BAD_GROUND_TRUTH = "invalid-ground-truth"
ERROR_CONFIG = "bad-config"
ERROR_LINE_TOO_LONG = "line-too-long"
ERROR_INTERNAL = "internal"


class ScoreRequest(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    id: str = Field(min_length=1)
    ground_truth: Optional[dict[str, Any]] = None
    ground_truth_toon: Optional[str] = None
    completion: str
    graph_schema: Optional[Literal["object-relation", "human-object"]] = Field(default=None, alias="schema")
    weights: Optional[dict[str, FiniteFloat]] = None
    match: Optional[dict[str, Any]] = None

    @model_validator(mode="after")
    def _one_ground_truth(self) -> "ScoreRequest":
        if (self.ground_truth is None) == (self.ground_truth_toon is None):
            raise ValueError("exactly one of ground_truth and ground_truth_toon is required")
        return self


class ErrorInfo(BaseModel):
    code: str
    message: str


class ScoreResponse(BaseModel):
    """Response envelope; breakdown fields are carried as extra keys."""
    model_config = ConfigDict(extra="allow")

    id: Optional[str] = None
    version: str = PROTOCOL_VERSION
    error: Optional[ErrorInfo] = None

    def to_line(self) -> str:
        # json.dumps writes floats with repr, so totals survive the wire bit for bit
        return json.dumps(self.model_dump(exclude_none=True), separators=(",", ":"), ensure_ascii=False)


@dataclass(frozen=True)
class ScoringDefaults:
    schema: Schema = Schema.OBJECT_RELATION
    weights: RewardWeights = field(default_factory=RewardWeights)
    match: MatchConfig = field(default_factory=MatchConfig)


def error_line(code: str, message: str, request_id: Optional[str] = None) -> str:
    return ScoreResponse(id=request_id, error=ErrorInfo(code=code, message=message)).to_line()


def _request_id(raw: Any) -> Optional[str]:
    if isinstance(raw, dict) and isinstance(raw.get("id"), str) and raw["id"]:
        return str(raw["id"])
    return None


def score_request(request: ScoreRequest, defaults: ScoringDefaults) -> ScoreResponse:
    """
    Score a validated request.

    Raises:
        ConfigError: on invalid weight or match overrides.
        ValueError: when the ground truth is not a valid graph.
    """
    schema = Schema(request.graph_schema) if request.graph_schema else defaults.schema
    if request.ground_truth is not None:
        gt_outcome = outcome_from_dict(request.ground_truth, schema)
    else:
        gt_outcome = parse_toon(request.ground_truth_toon or "", schema)
    gt = gt_outcome.valid_graph
    if gt is None:
        detail = "; ".join(str(d) for d in gt_outcome.diagnostics[:3])
        raise ValueError(f"ground truth is not a valid {schema.value} graph: {detail}")

    weights = defaults.weights.with_overrides(request.weights) if request.weights else defaults.weights
    cfg = defaults.match
    if request.match:
        try:
            cfg = replace(cfg, **request.match)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid match overrides: {e}") from None

    breakdown = score_completion(gt, request.completion, weights, cfg)
    return ScoreResponse(id=request.id, **breakdown.to_dict())


def handle_line(line: "bytes | str", defaults: ScoringDefaults) -> str:
    """Turn one request line into one response line (without newline)."""
    raw: Any = None
    try:
        text = line.decode("utf-8") if isinstance(line, bytes) else line
        try:
            raw = json.loads(text)
        except (ValueError, RecursionError) as e:
            return error_line(ERROR_BAD_JSON, str(e))
        try:
            request = ScoreRequest.model_validate(raw)
        except ValidationError as e:
            errors = "; ".join(
                f"{'.'.join(str(p) for p in err['loc']) or 'request'}: {err['msg']}" for err in e.errors()[:5]
            )
            return error_line(ERROR_BAD_REQUEST, errors, _request_id(raw))
        try:
            return score_request(request, defaults).to_line()
        except ConfigError as e:
            return error_line(ERROR_CONFIG, str(e), request.id)
        except ValueError as e:
            return error_line(ERROR_BAD_GROUND_TRUTH, str(e), request.id)
    except UnicodeDecodeError as e:
        return error_line(ERROR_BAD_REQUEST, f"request is not UTF-8: {e}")
    except Exception as e:  # a bad line must never take the service down
        logger.exception("Unexpected error while handling a request")
        return error_line(ERROR_INTERNAL, f"{type(e).__name__}: {e}", _request_id(raw))
