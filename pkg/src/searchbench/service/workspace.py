"""Data-directory layout and index lifecycle.

    <data_dir>/corpus/<repo>.jsonl
    <data_dir>/index/<repo>/<retriever>/   (index files + meta.json)
    <data_dir>/annotations.db
    <data_dir>/cache/embeddings.db

Index builds are content-addressed: meta.json records the corpus digest and
retriever fingerprint, so rebuilding over an unchanged corpus is a no-op.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from searchbench.annotations.store import AnnotationStore
from searchbench.ingest.entities import CodeEntity, read_corpus
from searchbench.retrieval.bm25 import (
    bm25_search,
    build_sparse_index,
    load_sparse_index,
    save_sparse_index,
)
from searchbench.retrieval.dense import (
    build_dense_index,
    dense_search,
    load_dense_index,
    save_dense_index,
)
from searchbench.retrieval.embeddings import EmbeddingClient
from searchbench.retrieval.types import (
    KIND_DENSE,
    KIND_SPARSE,
    RankedResult,
    RetrieverConfig,
    document_text,
    retriever_fingerprint,
)

_META_FILE = "meta.json"


class IndexMissingError(Exception):
    """No up-to-date index on disk for the requested (repo, retriever)."""


class Workspace:
    def __init__(self, data_dir: Path | str):
        self.data_dir = Path(data_dir)
        self._corpora: dict[str, list[CodeEntity]] = {}
        self._entity_maps: dict[str, dict[str, CodeEntity]] = {}
        self._sparse_cache: dict[tuple[str, str], object] = {}
        self._dense_cache: dict[tuple[str, str], object] = {}
        self._store: AnnotationStore | None = None

    # -- paths ---------------------------------------------------------

    def corpus_path(self, repo: str) -> Path:
        return self.data_dir / "corpus" / f"{repo}.jsonl"

    def index_dir(self, repo: str, retriever: str) -> Path:
        return self.data_dir / "index" / repo / retriever

    @property
    def annotations_path(self) -> Path:
        return self.data_dir / "annotations.db"

    @property
    def embedding_cache_path(self) -> Path:
        return self.data_dir / "cache" / "embeddings.db"

    # -- corpus ----------------------------------------------------------

    def corpus(self, repo: str) -> list[CodeEntity]:
        if repo not in self._corpora:
            path = self.corpus_path(repo)
            if not path.is_file():
                raise FileNotFoundError(
                    f"no corpus for repo {repo!r}; run: searchbench ingest"
                )
            self._corpora[repo] = read_corpus(path)
        return self._corpora[repo]

    def entities_by_id(self, repo: str) -> dict[str, CodeEntity]:
        if repo not in self._entity_maps:
            self._entity_maps[repo] = {e.entity_id: e for e in self.corpus(repo)}
        return self._entity_maps[repo]

    def corpus_digest(self, repo: str) -> str:
        return hashlib.sha256(self.corpus_path(repo).read_bytes()).hexdigest()

    # -- store ------------------------------------------------------------

    @property
    def store(self) -> AnnotationStore:
        if self._store is None:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            self._store = AnnotationStore(self.annotations_path)
        return self._store

    # -- index lifecycle -----------------------------------------------------

    def _meta(self, repo: str, retriever: str) -> dict | None:
        meta_path = self.index_dir(repo, retriever) / _META_FILE
        if not meta_path.is_file():
            return None
        with open(meta_path, encoding="utf-8") as handle:
            return json.load(handle)

    def index_up_to_date(self, repo: str, config: RetrieverConfig) -> bool:
        meta = self._meta(repo, config.name)
        return bool(
            meta
            and meta.get("corpus_digest") == self.corpus_digest(repo)
            and meta.get("fingerprint") == retriever_fingerprint(config)
        )

    def build_index(
        self,
        repo: str,
        config: RetrieverConfig,
        *,
        embed_client: EmbeddingClient | None = None,
        force: bool = False,
    ) -> bool:
        """Build and persist one index; returns False when already current."""
        if not force and self.index_up_to_date(repo, config):
            return False
        entities = self.corpus(repo)
        texts = [document_text(e.docstring, e.code) for e in entities]
        ids = [e.entity_id for e in entities]
        directory = self.index_dir(repo, config.name)
        if config.kind == KIND_SPARSE:
            index = build_sparse_index(
                list(zip(ids, texts)), k1=config.k1, b=config.b
            )
            save_sparse_index(index, directory)
            self._sparse_cache.pop((repo, config.name), None)
        else:
            if embed_client is None:
                embed_client = EmbeddingClient.from_env(self.embedding_cache_path)
            vectors = embed_client.embed(texts)
            index = build_dense_index(ids, vectors, embed_client.model_id)
            save_dense_index(index, directory)
            self._dense_cache.pop((repo, config.name), None)
        meta = {
            "corpus_digest": self.corpus_digest(repo),
            "fingerprint": retriever_fingerprint(config),
            "kind": config.kind,
        }
        with open(
            directory / _META_FILE, "w", encoding="utf-8", newline="\n"
        ) as handle:
            json.dump(meta, handle, sort_keys=True, separators=(",", ":"))
            handle.write("\n")
        return True

    def _require_index(self, repo: str, config: RetrieverConfig) -> None:
        if not self.index_up_to_date(repo, config):
            raise IndexMissingError(
                f"index for repo={repo!r} retriever={config.name!r} is missing "
                f"or stale; run: searchbench index --repo {repo} "
                f"--retriever {config.name}"
            )

    def search(
        self,
        repo: str,
        config: RetrieverConfig,
        query: str,
        *,
        embed_client: EmbeddingClient | None = None,
    ) -> list[RankedResult]:
        """Top-cutoff results under the named retriever."""
        self._require_index(repo, config)
        key = (repo, config.name)
        if config.kind == KIND_SPARSE:
            if key not in self._sparse_cache:
                self._sparse_cache[key] = load_sparse_index(
                    self.index_dir(repo, config.name)
                )
            return bm25_search(self._sparse_cache[key], query, k=config.cutoff)
        if key not in self._dense_cache:
            self._dense_cache[key] = load_dense_index(
                self.index_dir(repo, config.name)
            )
        index = self._dense_cache[key]
        if embed_client is None:
            embed_client = EmbeddingClient.from_env(self.embedding_cache_path)
        if embed_client.model_id != index.model_id:
            # Query and documents must share one embedding space.
            raise ValueError(
                f"query embedding model {embed_client.model_id!r} does not "
                f"match index model {index.model_id!r}; rebuild the index"
            )
        query_vector = embed_client.embed([query])[0]
        return dense_search(index, query_vector, k=config.cutoff)

    def close(self) -> None:
        if self._store is not None:
            self._store.close()
            self._store = None
