"""
JSON reporter: full-precision machine-readable reports.

Every report carries its kind and the effective configuration it was
produced with.
"""

import json
import logging
from typing import Any, Mapping, Optional

logger = logging.getLogger(__name__)


def report_json(kind: str, payload: Mapping[str, Any], config: Optional[Mapping[str, Any]] = None) -> str:
    """
    Format a report as a JSON string.

    Args:
        kind: Report kind ("metrics", "sgdet", "rewards", "filter", ...).
        payload: Report body; merged at the top level.
        config: Effective configuration, embedded under "config".

    Returns:
        The JSON text (indented).
    """
    data: dict[str, Any] = {"kind": kind, **payload}
    if config is not None:
        data["config"] = dict(config)
    output = json.dumps(data, indent=2, ensure_ascii=False)
    logger.info("JSON %s report: %d bytes", kind, len(output))
    return output
