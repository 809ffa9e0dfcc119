"""Extraction of the final graph from a raw model completion."""

import logging
import re

from src.graph.model import Schema
from src.toon.outcome import Diagnostic, DiagnosticCode, ParseOutcome
from src.toon.toon_format import parse_toon

logger = logging.getLogger(__name__)

ANSWER_OPEN = "<answer>"
ANSWER_CLOSE = "</answer>"

_ANSWER_RE = re.compile(re.escape(ANSWER_OPEN) + r"(.*?)" + re.escape(ANSWER_CLOSE), re.DOTALL)


def has_answer_tags(completion: str) -> bool:
    return _ANSWER_RE.search(completion) is not None


def extract_answer(completion: str, schema: Schema = Schema.OBJECT_RELATION) -> ParseOutcome:
    """
    Parse the graph inside the last well-formed <answer>...</answer> pair.

    Reasoning text before or after the tags is ignored. A completion without a
    closed tag pair yields valid=0 with a missing-tags diagnostic.
    """
    blocks = _ANSWER_RE.findall(completion)
    if not blocks:
        logger.debug("Completion has no closed answer tags (%d chars)", len(completion))
        return ParseOutcome.failure(Diagnostic(
            DiagnosticCode.MISSING_TAGS,
            f"No {ANSWER_OPEN}...{ANSWER_CLOSE} block found",
        ))
    # A stray opening tag inside the block belongs to an unclosed earlier attempt
    content = blocks[-1].rsplit(ANSWER_OPEN, 1)[-1]
    return parse_toon(content, schema)
