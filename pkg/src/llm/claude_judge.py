"""
Claude-backed equivalence judge.

Sends one disputed pair per request with the scene description and reads a
{"equivalent": bool} verdict back. API and parse failures surface as
JudgeError; the evaluator then scores the pair as a strict non-match.
"""

import logging
import os
import time
from typing import Optional

from anthropic import Anthropic
from anthropic.types import TextBlock

from src.errors import JudgeError
from src.llm.prompts import SYSTEM_PROMPT, build_object_prompt, build_predicate_prompt, parse_verdict

logger = logging.getLogger(__name__)

DEFAULT_MODEL = "claude-sonnet-4-20250514"


class ClaudeJudge:
    def __init__(self, api_key: Optional[str] = None, model: str = DEFAULT_MODEL, max_tokens: int = 64):
        key = api_key or os.environ.get("ANTHROPIC_API_KEY")
        if not key:
            raise ValueError(
                "No Anthropic API key provided. Set ANTHROPIC_API_KEY environment "
                "variable or pass api_key parameter."
            )
        self.model = model
        self.max_tokens = max_tokens
        self._client = Anthropic(api_key=key)

    def _ask(self, user_prompt: str) -> bool:
        logger.debug("Judge prompt length: %d chars", len(user_prompt))
        t0 = time.monotonic()
        try:
            response = self._client.messages.create(
                model=self.model,
                max_tokens=self.max_tokens,
                system=SYSTEM_PROMPT,
                messages=[{"role": "user", "content": user_prompt}],
            )
        except Exception as e:
            logger.error("Claude API request failed: %s", e)
            raise JudgeError(f"Claude API request failed: {e}") from e

        elapsed_ms = (time.monotonic() - t0) * 1000
        logger.debug(
            "Claude verdict in %.0fms, tokens in=%s out=%s",
            elapsed_ms,
            getattr(response.usage, "input_tokens", None),
            getattr(response.usage, "output_tokens", None),
        )
        # Other block types carry no .text
        text_blocks = [b for b in response.content if isinstance(b, TextBlock)]
        return parse_verdict(text_blocks[0].text if text_blocks else "")

    def judge_objects(self, label_a: str, label_b: str, scene_context: str) -> bool:
        if label_a == label_b:
            return True
        return self._ask(build_object_prompt(label_a, label_b, scene_context))

    def judge_predicates(self, pred_a: str, pred_b: str, subject: str, obj: str, scene_context: str) -> bool:
        if pred_a == pred_b:
            return True
        return self._ask(build_predicate_prompt(pred_a, pred_b, subject, obj, scene_context))
