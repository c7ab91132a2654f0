"""Sparse and dense indexing plus top-k query answering over a corpus."""

from searchbench.retrieval.bm25 import (
    SparseIndex,
    bm25_search,
    build_sparse_index,
    load_sparse_index,
    save_sparse_index,
)
from searchbench.retrieval.dense import (
    DenseIndex,
    build_dense_index,
    dense_search,
    load_dense_index,
    save_dense_index,
)
from searchbench.retrieval.embeddings import EmbeddingClient, EmbeddingError
from searchbench.retrieval.tokenize import tokenize
from searchbench.retrieval.types import (
    RankedResult,
    RetrieverConfig,
    document_text,
    retriever_fingerprint,
)

__all__ = [
    "DenseIndex",
    "EmbeddingClient",
    "EmbeddingError",
    "RankedResult",
    "RetrieverConfig",
    "SparseIndex",
    "bm25_search",
    "build_dense_index",
    "build_sparse_index",
    "dense_search",
    "document_text",
    "load_dense_index",
    "load_sparse_index",
    "retriever_fingerprint",
    "save_dense_index",
    "save_sparse_index",
    "tokenize",
]
