from .adapters import NativeSource, ag_records, load_native_records, psg_records, pvsg_records, rescale_box
from .cleaning import clean_graph
from .corruption import CorruptionPolicy, corrupt_graph
from .filtering import FilterStats, ZeroRelationFilter, filter_zero_relation
from .length_stats import LengthMeasure, LengthStats, LengthSummary, length_stats, load_token_counts
from .records import (
    DatasetSplit,
    Record,
    iter_records,
    record_from_dict,
    record_line,
    record_to_dict,
    load_completions,
    load_predictions,
    load_split,
    write_records,
    write_split,
)
from .temporal import ContextProtocol, frame_seed, previous_context
from .thinning import ThinningReport, thin_base_annot

__all__ = [
    "NativeSource",
    "ag_records",
    "load_native_records",
    "psg_records",
    "pvsg_records",
    "rescale_box",
    "clean_graph",
    "CorruptionPolicy",
    "corrupt_graph",
    "FilterStats",
    "ZeroRelationFilter",
    "filter_zero_relation",
    "LengthMeasure",
    "LengthStats",
    "LengthSummary",
    "length_stats",
    "load_token_counts",
    "DatasetSplit",
    "Record",
    "iter_records",
    "record_from_dict",
    "record_line",
    "record_to_dict",
    "load_completions",
    "load_predictions",
    "load_split",
    "write_records",
    "write_split",
    "ContextProtocol",
    "frame_seed",
    "previous_context",
    "ThinningReport",
    "thin_base_annot",
]
