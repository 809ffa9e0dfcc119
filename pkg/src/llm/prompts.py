"""
Prompts and verdict parsing shared by the LLM-backed equivalence judges.

The judge sees one disputed pair (two object labels, or two predicates with
their endpoint labels) plus a short textual description of the scene, and
answers with a JSON object {"equivalent": true|false}.
"""

import json
import logging
import re

from src.errors import JudgeError
from src.graph.model import SceneGraph

logger = logging.getLogger(__name__)


SYSTEM_PROMPT = """You are an annotation reviewer for scene graphs. You decide whether two names \
produced by different annotators refer to the same thing in the same scene.

Answer "equivalent": true only when the two names are synonyms, one is a more specific \
form of the other that fits the scene, or they differ only in spelling or word form. \
Different categories that merely co-occur are not equivalent.

Respond with EXACTLY one JSON object and nothing else:
{"equivalent": true}
or
{"equivalent": false}"""


def describe_scene(g: SceneGraph, max_relations: int = 20) -> str:
    """Short plain-text scene description: object labels then relation triplets."""
    labels = ", ".join(f"{o.label}#{o.id}" for o in g.objects) or "(none)"
    names = {o.id: o.label for o in g.objects}
    triplets = [
        f"{names.get(r.subject_id, '?')} {r.predicate} {names.get(r.object_id, '?')}"
        for r in g.relations[:max_relations]
    ]
    lines = [f"Objects: {labels}"]
    if triplets:
        lines.append("Relations: " + "; ".join(triplets))
    if len(g.relations) > max_relations:
        lines.append(f"(+{len(g.relations) - max_relations} more relations)")
    return "\n".join(lines)


def build_object_prompt(label_a: str, label_b: str, scene_context: str) -> str:
    return f"""Scene:
{scene_context}

Reference object name: "{label_a}"
Predicted object name: "{label_b}"

The two boxes overlap in the image. Do these names refer to the same object category here?
Respond with the JSON object only."""


def build_predicate_prompt(pred_a: str, pred_b: str, subject: str, obj: str, scene_context: str) -> str:
    return f"""Scene:
{scene_context}

Reference relation: {subject} --{pred_a}--> {obj}
Predicted relation: {subject} --{pred_b}--> {obj}

Both relations connect the same pair of objects. Do the predicates "{pred_a}" and "{pred_b}" \
describe the same relationship here?
Respond with the JSON object only."""


_JSON_OBJECT_RE = re.compile(r"\{.*?\}", re.DOTALL)


def parse_verdict(text: str) -> bool:
    """
    Read a judge verdict.

    Accepts {"equivalent": bool} anywhere in the reply (models sometimes wrap
    it in prose or code fences) and falls back to a leading yes/no.

    Raises:
        JudgeError: when the reply holds no recognisable verdict.
    """
    stripped = text.strip()
    for candidate in _JSON_OBJECT_RE.findall(stripped):
        try:
            data = json.loads(candidate)
        except json.JSONDecodeError:
            continue
        if isinstance(data, dict) and isinstance(data.get("equivalent"), bool):
            return bool(data["equivalent"])

    word = stripped.lower().lstrip("`\"' ").split(maxsplit=1)
    if word:
        head = word[0].rstrip(".,!:;\"'")
        if head in ("yes", "true"):
            return True
        if head in ("no", "false"):
            return False

    logger.warning("Unparseable judge reply: %.200s", stripped)
    raise JudgeError(f"Judge reply holds no verdict: {stripped[:80]!r}")
