"""
Configuration file support for scenegraph-kit.

Looks for a .sgkit.yml file next to (or above) the input path, or in the
current directory, and loads reward weights, matching parameters, the
corruption policy, evaluation and service settings. CLI flags override
file values; the effective config is echoed into every report.

Example .sgkit.yml:

    schema: object-relation        # or human-object

    weights:
      preset: full                 # base | balance | full, then overrides
      w_r: 3.0
      alpha_obj: 2.0

    match:
      iou_threshold: 0.5
      gate_matched_iou: true

    corruption:
      object_dropout: 0.1
      relation_dropout: 0.2

    eval:
      precision_at_k: min          # or k
      include_failed: true
      judge_endpoint: http://localhost:8000/v1/chat/completions
      max_in_flight: 8

    service:
      workers: 4
      port: 8765
"""

import logging
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Optional

import yaml

from src.dataset.corruption import CorruptionPolicy
from src.errors import ConfigError
from src.graph.model import Schema
from src.graph.vocabulary import require_names
from src.matching.matcher import MatchConfig
from src.metrics.sgdet import DEFAULT_K_VALUES, PrecisionMode
from src.reward.weights import RewardWeights

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FILENAME = ".sgkit.yml"


@dataclass
class EvalSettings:
    precision_at_k: str = PrecisionMode.MIN_K_PRED.value
    include_failed: bool = True
    k_values: list[int] = field(default_factory=lambda: list(DEFAULT_K_VALUES))
    judge_endpoint: Optional[str] = None
    judge_model: str = "Qwen3-4B-Instruct-2507"
    judge_timeout: float = 30.0
    judge_retries: int = 3
    max_in_flight: int = 8

    def __post_init__(self) -> None:
        if self.precision_at_k not in {m.value for m in PrecisionMode}:
            raise ConfigError(f"eval.precision_at_k must be 'min' or 'k', got {self.precision_at_k!r}")
        if self.max_in_flight < 1 or self.judge_retries < 1:
            raise ConfigError("eval.max_in_flight and eval.judge_retries must be >= 1")
        if not self.k_values or any(not isinstance(k, int) or k <= 0 for k in self.k_values):
            raise ConfigError(f"eval.k_values must be positive integers, got {self.k_values}")


@dataclass
class ServiceSettings:
    workers: int = 4
    host: str = "127.0.0.1"
    port: int = 8765
    max_line_bytes: int = 16 * 1024 * 1024

    def __post_init__(self) -> None:
        if self.workers < 1:
            raise ConfigError(f"service.workers must be >= 1, got {self.workers}")
        if not 0 <= self.port <= 65535:
            raise ConfigError(f"service.port out of range: {self.port}")


@dataclass
class Config:
    """Parsed scenegraph-kit configuration."""
    schema: Schema = Schema.OBJECT_RELATION
    weights: RewardWeights = field(default_factory=RewardWeights)
    match: MatchConfig = field(default_factory=MatchConfig)
    corruption: CorruptionPolicy = field(default_factory=CorruptionPolicy)
    eval: EvalSettings = field(default_factory=EvalSettings)
    service: ServiceSettings = field(default_factory=ServiceSettings)
    source: Optional[str] = None

    def to_dict(self) -> dict[str, Any]:
        """Effective configuration, as echoed into reports."""
        return {
            "source": self.source,
            "schema": self.schema.value,
            "weights": self.weights.to_dict(),
            "match": asdict(self.match),
            "corruption": self.corruption.to_dict(),
            "eval": asdict(self.eval),
            "service": asdict(self.service),
        }


def _section(raw: dict[str, Any], name: str) -> dict[str, Any]:
    value = raw.get(name) or {}
    if not isinstance(value, dict):
        raise ConfigError(f"Config section '{name}' must be a mapping")
    return value


def _known(cls: Any, values: dict[str, Any], section: str) -> dict[str, Any]:
    names = {f.name for f in fields(cls)}
    for key in sorted(set(values) - names):
        logger.warning("Ignoring unknown config key %s.%s", section, key)
    return {k: v for k, v in values.items() if k in names}


def _build(cls: Any, values: dict[str, Any], section: str) -> Any:
    try:
        return cls(**_known(cls, values, section))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid '{section}' settings: {e}") from None


def weights_from_mapping(values: dict[str, Any], base: Optional[RewardWeights] = None) -> RewardWeights:
    """
    A preset with the remaining keys applied as overrides.

    Without a preset key the overrides apply to base (default: the full preset).
    """
    values = dict(values)
    if "preset" in values:
        base = RewardWeights.preset(str(values.pop("preset")))
    return (base or RewardWeights.preset("full")).with_overrides(values)


def config_from_dict(raw: dict[str, Any], source: Optional[str] = None) -> Config:
    """
    Build a Config from a decoded mapping.

    Raises:
        ConfigError: on invalid values (unknown keys are only warned about).
    """
    known_sections = {"schema", "weights", "match", "corruption", "eval", "service"}
    for key in sorted(set(raw) - known_sections):
        logger.warning("Ignoring unknown config key %s", key)

    try:
        schema = Schema(raw.get("schema", Schema.OBJECT_RELATION.value))
    except ValueError:
        raise ConfigError(f"Unknown schema {raw.get('schema')!r}") from None

    corruption = dict(_section(raw, "corruption"))
    if "vocabulary" in corruption:
        corruption["vocabulary"] = tuple(require_names(corruption["vocabulary"] or (), "corruption.vocabulary"))

    return Config(
        schema=schema,
        weights=weights_from_mapping(_section(raw, "weights")),
        match=_build(MatchConfig, _section(raw, "match"), "match"),
        corruption=_build(CorruptionPolicy, corruption, "corruption"),
        eval=_build(EvalSettings, _section(raw, "eval"), "eval"),
        service=_build(ServiceSettings, _section(raw, "service"), "service"),
        source=source,
    )


def load_config(config_path: Optional[str] = None, search_path: Optional[str] = None) -> Config:
    """
    Load configuration from a .sgkit.yml file.

    Search order:
      1. Explicit config_path if provided
      2. .sgkit.yml in the search_path directory (or its parent if search_path is a file), walking up
      3. .sgkit.yml in the current working directory

    Returns a Config with defaults if no config file is found.
    """
    path = _find_config_file(config_path, search_path)

    if path is None:
        logger.debug("No config file found, using defaults")
        return Config()

    logger.info("Loading config from %s", path)

    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid YAML in {path}: {e}") from None

    if not isinstance(raw, dict):
        logger.warning("Config file is not a YAML mapping, using defaults")
        return Config(source=path)

    return config_from_dict(raw, source=path)


def load_weights_file(path: str, base: Optional[RewardWeights] = None) -> RewardWeights:
    """Reward weights from a standalone YAML/JSON file (same keys as the weights section)."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid weights file {path}: {e}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"Weights file {path} must be a mapping")
    return weights_from_mapping(raw.get("weights", raw), base)


def _find_config_file(
    config_path: Optional[str] = None,
    search_path: Optional[str] = None,
) -> Optional[str]:
    """Find the config file, returning its path or None."""
    if config_path:
        p = Path(config_path)
        if p.is_file():
            return str(p)
        logger.warning("Config file not found: %s", config_path)
        return None

    if search_path:
        start = Path(search_path).resolve()
        if start.is_file():
            start = start.parent
        for directory in (start, *start.parents):
            candidate = directory / DEFAULT_CONFIG_FILENAME
            if candidate.is_file():
                return str(candidate)

    cwd_candidate = Path.cwd() / DEFAULT_CONFIG_FILENAME
    if cwd_candidate.is_file():
        return str(cwd_candidate)

    return None
