"""Exhaustive cosine-similarity search over embedded documents.

No approximate-nearest-neighbor structure: corpora here are a few thousand
functions at most, and exact scan keeps results reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from searchbench.retrieval.types import RankedResult

_VECTORS_FILE = "vectors.npy"
_META_FILE = "dense.json"


@dataclass
class DenseIndex:
    entity_ids: list[str]
    vectors: np.ndarray  # (n_docs, dim) float64
    model_id: str

    def __post_init__(self) -> None:
        if self.vectors.ndim != 2 or self.vectors.shape[0] != len(self.entity_ids):
            raise ValueError("vector matrix does not match entity ids")

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])


def build_dense_index(
    entity_ids: Sequence[str], vectors: np.ndarray, model_id: str
) -> DenseIndex:
    if len(entity_ids) == 0:
        raise ValueError("cannot build a dense index over an empty corpus")
    return DenseIndex(
        entity_ids=list(entity_ids),
        vectors=np.asarray(vectors, dtype=np.float64),
        model_id=model_id,
    )


def dense_search(
    index: DenseIndex, query_vector: Sequence[float], k: int = 10
) -> list[RankedResult]:
    """Top-k by cosine similarity; ties broken by ascending entity_id.

    Zero-norm document vectors score -inf and sink to the bottom; a
    zero-norm query is an error because every similarity would be undefined.
    """
    q = np.asarray(query_vector, dtype=np.float64)
    if q.ndim != 1 or q.shape[0] != index.dim:
        raise ValueError(f"query dimension {q.shape} does not match index {index.dim}")
    qnorm = float(np.linalg.norm(q))
    if qnorm == 0.0:
        raise ValueError("zero-norm query embedding")
    doc_norms = np.linalg.norm(index.vectors, axis=1)
    sims = np.full(len(index.entity_ids), float("-inf"))
    nonzero = doc_norms != 0.0
    sims[nonzero] = (index.vectors[nonzero] @ q) / (doc_norms[nonzero] * qnorm)
    order = sorted(
        range(len(index.entity_ids)),
        key=lambda i: (-sims[i], index.entity_ids[i]),
    )[:k]
    return [
        RankedResult(entity_id=index.entity_ids[i], rank=pos + 1, score=float(sims[i]))
        for pos, i in enumerate(order)
    ]


def save_dense_index(index: DenseIndex, directory: Path | str) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    np.save(directory / _VECTORS_FILE, index.vectors)
    meta = {"entity_ids": index.entity_ids, "model_id": index.model_id}
    with open(directory / _META_FILE, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(meta, handle, sort_keys=True, separators=(",", ":"))
        handle.write("\n")
    return directory / _META_FILE


def load_dense_index(directory: Path | str) -> DenseIndex:
    directory = Path(directory)
    vectors = np.load(directory / _VECTORS_FILE)
    with open(directory / _META_FILE, encoding="utf-8") as handle:
        meta = json.load(handle)
    return DenseIndex(
        entity_ids=meta["entity_ids"], vectors=vectors, model_id=meta["model_id"]
    )
