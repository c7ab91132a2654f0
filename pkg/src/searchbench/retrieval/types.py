"""Retriever configuration and the ranked-result record."""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_K1 = 1.5
DEFAULT_B = 0.75
DEFAULT_CUTOFF = 10

KIND_SPARSE = "sparse_bm25"
KIND_DENSE = "dense"


@dataclass(frozen=True)
class RetrieverConfig:
    name: str
    kind: str  # sparse_bm25 | dense
    model_id: str = ""  # dense only
    k1: float = DEFAULT_K1
    b: float = DEFAULT_B
    cutoff: int = DEFAULT_CUTOFF

    def __post_init__(self) -> None:
        if self.kind not in (KIND_SPARSE, KIND_DENSE):
            raise ValueError(f"unknown retriever kind {self.kind!r}")
        if self.cutoff < 1:
            raise ValueError(f"cutoff must be >= 1, got {self.cutoff}")
        if self.kind == KIND_DENSE and not self.model_id:
            raise ValueError("dense retriever requires a model_id")
        if self.kind == KIND_SPARSE:
            if self.k1 <= 0:
                raise ValueError(f"k1 must be positive, got {self.k1}")
            if not 0.0 <= self.b <= 1.0:
                raise ValueError(f"b must be in [0, 1], got {self.b}")


def retriever_fingerprint(config: RetrieverConfig) -> str:
    """Content-addressed identity of a retriever configuration.

    Label snapshots by fingerprint, not display name, so renaming a
    retriever in the app config cannot silently split annotation history.
    """
    if config.kind == KIND_SPARSE:
        return f"{config.kind}(k1={config.k1!r},b={config.b!r},cutoff={config.cutoff})"
    return f"{config.kind}(model={config.model_id},cutoff={config.cutoff})"


@dataclass(frozen=True)
class RankedResult:
    entity_id: str
    rank: int  # 1-based
    score: float


def document_text(docstring: str, code: str) -> str:
    """Index/embedding text: documentation then code."""
    return f"{docstring}\n{code}"
