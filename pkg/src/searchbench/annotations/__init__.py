"""Persistent queries, result snapshots, and binary relevance labels."""

from searchbench.annotations.store import (
    AnnotationStore,
    ConflictError,
    QueryRecord,
    ReferentialError,
    RelevanceLabel,
    StoredLabel,
    normalize_query,
    query_identity,
)

__all__ = [
    "AnnotationStore",
    "ConflictError",
    "QueryRecord",
    "ReferentialError",
    "RelevanceLabel",
    "StoredLabel",
    "normalize_query",
    "query_identity",
]
