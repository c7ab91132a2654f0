"""Deterministic translation of a Python subset into single C functions."""

from searchbench.transpile.analyze import (
    CATEGORY_ATTRIBUTE,
    CATEGORY_GENERIC,
    CATEGORY_INVALID_ANNOTATION,
    CATEGORY_NONE_NOT_ALLOWED,
    CATEGORY_SOURCE_CODE,
    CATEGORY_SYNTAX,
    Failure,
    find_unsupported,
    parse_source,
)
from searchbench.transpile.core import TranspileResult, transpile_function
from searchbench.transpile.dataset import (
    DatasetResult,
    FailureStats,
    read_qa_records,
    render_category_table,
    render_node_kind_table,
    stats_to_dict,
    transpile_dataset,
)
from searchbench.transpile.emit import TypeMapping, emit_c

__all__ = [
    "CATEGORY_ATTRIBUTE",
    "CATEGORY_GENERIC",
    "CATEGORY_INVALID_ANNOTATION",
    "CATEGORY_NONE_NOT_ALLOWED",
    "CATEGORY_SOURCE_CODE",
    "CATEGORY_SYNTAX",
    "DatasetResult",
    "Failure",
    "FailureStats",
    "TranspileResult",
    "TypeMapping",
    "emit_c",
    "find_unsupported",
    "parse_source",
    "read_qa_records",
    "render_category_table",
    "render_node_kind_table",
    "stats_to_dict",
    "transpile_dataset",
    "transpile_function",
]
