from .claude_judge import ClaudeJudge
from .http_judge import HttpJudge
from .judge import CachedJudge, JudgeClient, SynonymJudge, load_synonym_judge
from .prompts import describe_scene, parse_verdict

__all__ = [
    "ClaudeJudge",
    "HttpJudge",
    "CachedJudge",
    "JudgeClient",
    "SynonymJudge",
    "load_synonym_judge",
    "describe_scene",
    "parse_verdict",
]
