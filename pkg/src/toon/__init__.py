from .answer import ANSWER_CLOSE, ANSWER_OPEN, extract_answer, has_answer_tags
from .json_format import graph_from_dict, graph_to_dict, outcome_from_dict, parse_json, serialize_json
from .outcome import Diagnostic, DiagnosticCode, ParseOutcome, ToonDocument
from .toon_format import parse_toon, serialize_toon

__all__ = [
    "ANSWER_CLOSE",
    "ANSWER_OPEN",
    "extract_answer",
    "has_answer_tags",
    "graph_from_dict",
    "graph_to_dict",
    "outcome_from_dict",
    "parse_json",
    "serialize_json",
    "Diagnostic",
    "DiagnosticCode",
    "ParseOutcome",
    "ToonDocument",
    "parse_toon",
    "serialize_toon",
]
