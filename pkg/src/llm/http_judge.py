"""
HTTP judge: asks a chat-completions style endpoint whether two names match.

Request (POST, JSON):

    {"model": "<model>", "temperature": 0, "max_tokens": 16,
     "messages": [{"role": "system", "content": SYSTEM_PROMPT},
                  {"role": "user", "content": "<pair + scene>"}]}

The reply is read from choices[0].message.content and must contain
{"equivalent": true|false} (a bare yes/no is also accepted). The bearer
token comes from SGKIT_JUDGE_TOKEN unless passed explicitly.
"""

import logging
import os
import time
from typing import Any, Optional

import requests

from src.errors import JudgeError
from src.llm.prompts import SYSTEM_PROMPT, build_object_prompt, build_predicate_prompt, parse_verdict

logger = logging.getLogger(__name__)

TOKEN_ENV_VAR = "SGKIT_JUDGE_TOKEN"


class HttpJudge:
    def __init__(
        self,
        endpoint: str,
        model: str = "Qwen3-4B-Instruct-2507",
        token: Optional[str] = None,
        timeout: float = 30.0,
        retries: int = 3,
        backoff: float = 1.0,
    ):
        if not endpoint:
            raise ValueError("HttpJudge needs an endpoint URL")
        if retries < 1:
            raise ValueError(f"retries must be >= 1, got {retries}")
        self.endpoint = endpoint
        self.model = model
        self.token = token if token is not None else os.environ.get(TOKEN_ENV_VAR)
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        return headers

    def _payload(self, user_prompt: str) -> dict[str, Any]:
        return {
            "model": self.model,
            "temperature": 0,
            "max_tokens": 16,
            "messages": [
                {"role": "system", "content": SYSTEM_PROMPT},
                {"role": "user", "content": user_prompt},
            ],
        }

    def _ask(self, user_prompt: str) -> bool:
        payload = self._payload(user_prompt)
        last_error: Optional[Exception] = None
        for attempt in range(1, self.retries + 1):
            t0 = time.monotonic()
            try:
                response = requests.post(
                    self.endpoint, json=payload, headers=self._headers(), timeout=self.timeout,
                )
                response.raise_for_status()
                content = response.json()["choices"][0]["message"]["content"]
                logger.debug(
                    "Judge reply in %.0fms (attempt %d): %.80s",
                    (time.monotonic() - t0) * 1000, attempt, content,
                )
                return parse_verdict(str(content))
            except requests.RequestException as e:
                last_error = e
                logger.warning("Judge request failed (attempt %d/%d): %s", attempt, self.retries, e)
            except (KeyError, IndexError, TypeError, ValueError) as e:
                last_error = e
                logger.warning("Malformed judge response (attempt %d/%d): %s", attempt, self.retries, e)
            except JudgeError as e:
                last_error = e
            if attempt < self.retries and self.backoff > 0:
                time.sleep(self.backoff * attempt)
        raise JudgeError(f"Judge at {self.endpoint} gave no verdict after {self.retries} attempt(s): {last_error}")

    def judge_objects(self, label_a: str, label_b: str, scene_context: str) -> bool:
        if label_a == label_b:
            return True
        return self._ask(build_object_prompt(label_a, label_b, scene_context))

    def judge_predicates(self, pred_a: str, pred_b: str, subject: str, obj: str, scene_context: str) -> bool:
        if pred_a == pred_b:
            return True
        return self._ask(build_predicate_prompt(pred_a, pred_b, subject, obj, scene_context))
