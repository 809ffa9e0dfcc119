from .protocol import (
    PROTOCOL_VERSION,
    ScoreRequest,
    ScoreResponse,
    ScoringDefaults,
    handle_line,
    score_request,
)
from .server import ScoringService, read_request_line, run_service

__all__ = [
    "PROTOCOL_VERSION",
    "ScoreRequest",
    "ScoreResponse",
    "ScoringDefaults",
    "handle_line",
    "score_request",
    "ScoringService",
    "read_request_line",
    "run_service",
]
