from .console_reporter import (
    report_filter_console,
    report_length_console,
    report_metrics_console,
    report_rewards_console,
    report_sgdet_console,
    report_thinning_console,
)
from .json_reporter import report_json

__all__ = [
    "report_filter_console",
    "report_length_console",
    "report_metrics_console",
    "report_rewards_console",
    "report_sgdet_console",
    "report_thinning_console",
    "report_json",
]
