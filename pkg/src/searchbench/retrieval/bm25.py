"""BM25 sparse index: build, persist, and query.

Scores use idf = ln(1 + (N - df + 0.5) / (df + 0.5)), which is strictly
positive, so any document containing at least one query term scores above
zero and zero-score documents never appear in results.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from searchbench.retrieval.tokenize import tokenize
from searchbench.retrieval.types import DEFAULT_B, DEFAULT_K1, RankedResult

_INDEX_FILE = "sparse.json"


@dataclass
class SparseIndex:
    entity_ids: list[str]
    doc_lengths: list[int]
    avg_doc_length: float
    # term -> [(doc index, term frequency)], ascending doc index
    postings: dict[str, list[tuple[int, int]]]
    k1: float = DEFAULT_K1
    b: float = DEFAULT_B
    document_frequencies: dict[str, int] = field(init=False)

    def __post_init__(self) -> None:
        self.document_frequencies = {
            term: len(entries) for term, entries in self.postings.items()
        }

    @property
    def doc_count(self) -> int:
        return len(self.entity_ids)

    def idf(self, term: str) -> float:
        df = self.document_frequencies.get(term, 0)
        return math.log(1.0 + (self.doc_count - df + 0.5) / (df + 0.5))


def build_sparse_index(
    documents: Sequence[tuple[str, str]],
    k1: float = DEFAULT_K1,
    b: float = DEFAULT_B,
) -> SparseIndex:
    """Index (entity_id, text) pairs. Empty corpus is an error."""
    if not documents:
        raise ValueError("cannot build a sparse index over an empty corpus")
    entity_ids = [doc_id for doc_id, _ in documents]
    if len(set(entity_ids)) != len(entity_ids):
        raise ValueError("duplicate entity ids in corpus")
    doc_lengths: list[int] = []
    postings: dict[str, list[tuple[int, int]]] = {}
    for index, (_, text) in enumerate(documents):
        tokens = tokenize(text)
        doc_lengths.append(len(tokens))
        for term, tf in sorted(Counter(tokens).items()):
            postings.setdefault(term, []).append((index, tf))
    avg = sum(doc_lengths) / len(doc_lengths)
    return SparseIndex(
        entity_ids=entity_ids,
        doc_lengths=doc_lengths,
        avg_doc_length=avg,
        postings=postings,
        k1=k1,
        b=b,
    )


def bm25_search(index: SparseIndex, query: str, k: int = 10) -> list[RankedResult]:
    """Top-k by BM25; ties broken by ascending entity_id; zero scores dropped."""
    query_tokens = tokenize(query)
    if not query_tokens:
        return []
    scores: dict[int, float] = {}
    for term in query_tokens:
        entries = index.postings.get(term)
        if not entries:
            continue
        idf = index.idf(term)
        for doc_index, tf in entries:
            dl = index.doc_lengths[doc_index]
            norm = index.k1 * (1 - index.b + index.b * dl / index.avg_doc_length)
            contribution = idf * tf * (index.k1 + 1) / (tf + norm)
            scores[doc_index] = scores.get(doc_index, 0.0) + contribution
    ranked = sorted(
        ((index.entity_ids[i], s) for i, s in scores.items() if s > 0.0),
        key=lambda item: (-item[1], item[0]),
    )[:k]
    return [
        RankedResult(entity_id=doc_id, rank=position + 1, score=score)
        for position, (doc_id, score) in enumerate(ranked)
    ]


def save_sparse_index(index: SparseIndex, directory: Path | str) -> Path:
    """Persist as sorted-key JSON; rebuilding the same corpus rewrites
    identical bytes."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    payload = {
        "entity_ids": index.entity_ids,
        "doc_lengths": index.doc_lengths,
        "avg_doc_length": index.avg_doc_length,
        "postings": {t: list(map(list, e)) for t, e in index.postings.items()},
        "k1": index.k1,
        "b": index.b,
    }
    path = directory / _INDEX_FILE
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(payload, handle, sort_keys=True, separators=(",", ":"))
        handle.write("\n")
    return path


def load_sparse_index(directory: Path | str) -> SparseIndex:
    path = Path(directory) / _INDEX_FILE
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    return SparseIndex(
        entity_ids=payload["entity_ids"],
        doc_lengths=payload["doc_lengths"],
        avg_doc_length=payload["avg_doc_length"],
        postings={
            term: [(int(i), int(tf)) for i, tf in entries]
            for term, entries in payload["postings"].items()
        },
        k1=payload["k1"],
        b=payload["b"],
    )
