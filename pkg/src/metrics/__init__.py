from .evaluation import (
    EvalMode,
    SampleMetrics,
    align_objects,
    evaluate_sample_soft,
    evaluate_sample_strict,
    evaluate_samples,
    scene_context,
)
from .report import MetricsReport, aggregate, format_metric, format_percent
from .sgdet import (
    DEFAULT_K_VALUES,
    PrecisionMode,
    SgdetAtK,
    Triplet,
    aggregate_sgdet,
    apply_constraint,
    evaluate_sgdet,
    triplets_from_graph,
)

__all__ = [
    "EvalMode",
    "SampleMetrics",
    "align_objects",
    "evaluate_sample_soft",
    "evaluate_sample_strict",
    "evaluate_samples",
    "scene_context",
    "MetricsReport",
    "aggregate",
    "format_metric",
    "format_percent",
    "DEFAULT_K_VALUES",
    "PrecisionMode",
    "SgdetAtK",
    "Triplet",
    "aggregate_sgdet",
    "apply_constraint",
    "evaluate_sgdet",
    "triplets_from_graph",
]
