"""Repository ingestion: walk, extract functions with docs, emit a corpus."""

from searchbench.ingest.entities import (
    CORPUS_FIELDS,
    CodeEntity,
    CorpusStats,
    compute_stats,
    make_entity,
    read_corpus,
    write_corpus,
)
from searchbench.ingest.extractors import (
    ExtractedFunction,
    ExtractionError,
    extract_functions,
)
from searchbench.ingest.repo import (
    DEFAULT_EXTENSIONS,
    LANGUAGES,
    IngestResult,
    RepoSpec,
    ingest_repo,
    make_repo_spec,
    walk_repo,
)

__all__ = [
    "CORPUS_FIELDS",
    "CodeEntity",
    "CorpusStats",
    "DEFAULT_EXTENSIONS",
    "ExtractedFunction",
    "ExtractionError",
    "IngestResult",
    "LANGUAGES",
    "RepoSpec",
    "compute_stats",
    "extract_functions",
    "ingest_repo",
    "make_entity",
    "make_repo_spec",
    "read_corpus",
    "walk_repo",
    "write_corpus",
]
