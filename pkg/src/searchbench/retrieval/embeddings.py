"""HTTP embedding provider client with a persistent content-addressed cache.

Vectors are cached by (model_id, sha256(text)) in a local SQLite database,
so re-indexing an unchanged corpus performs zero provider requests. Provider
failures retry with exponential backoff a fixed number of times and then
surface as EmbeddingError.
"""

from __future__ import annotations

import hashlib
import json
import os
import sqlite3
import threading
import time
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
import requests

ENV_URL = "EMBED_URL"
ENV_MODEL = "EMBED_MODEL"
ENV_DIM = "EMBED_DIM"

_SCHEMA = """
CREATE TABLE IF NOT EXISTS embeddings (
    model_id TEXT NOT NULL,
    text_sha TEXT NOT NULL,
    vector TEXT NOT NULL,
    PRIMARY KEY (model_id, text_sha)
)
"""


class EmbeddingError(Exception):
    pass


def _text_sha(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class EmbeddingClient:
    """Client for a `POST /embed {model, texts[]} -> {vectors[][]}` endpoint."""

    def __init__(
        self,
        base_url: str,
        model_id: str,
        dim: int,
        cache_path: Path | str | None = None,
        *,
        post: Callable[[str, dict], dict] | None = None,
        max_attempts: int = 3,
        backoff_s: float = 0.5,
        sleep: Callable[[float], None] = time.sleep,
        timeout_s: float = 60.0,
    ):
        self.base_url = base_url.rstrip("/")
        self.model_id = model_id
        self.dim = dim
        self.max_attempts = max_attempts
        self.backoff_s = backoff_s
        self._sleep = sleep
        self._timeout_s = timeout_s
        self._post = post or self._http_post
        self.request_count = 0
        self._conn: sqlite3.Connection | None = None
        self._lock = threading.RLock()
        if cache_path is not None:
            cache_path = Path(cache_path)
            cache_path.parent.mkdir(parents=True, exist_ok=True)
            # Shared across HTTP worker threads; the lock serializes access.
            self._conn = sqlite3.connect(cache_path, check_same_thread=False)
            self._conn.execute(_SCHEMA)
            self._conn.commit()

    @classmethod
    def from_env(cls, cache_path: Path | str | None = None) -> "EmbeddingClient":
        url = os.environ.get(ENV_URL)
        model = os.environ.get(ENV_MODEL)
        dim = os.environ.get(ENV_DIM)
        if not url or not model or not dim:
            raise EmbeddingError(
                f"embedding provider not configured: set {ENV_URL}, "
                f"{ENV_MODEL}, {ENV_DIM}"
            )
        return cls(base_url=url, model_id=model, dim=int(dim), cache_path=cache_path)

    def _http_post(self, url: str, payload: dict) -> dict:
        response = requests.post(url, json=payload, timeout=self._timeout_s)
        if response.status_code == 429 or response.status_code >= 500:
            raise EmbeddingError(f"provider returned {response.status_code}")
        response.raise_for_status()
        return response.json()

    def _cache_get(self, sha: str) -> np.ndarray | None:
        if self._conn is None:
            return None
        with self._lock:
            row = self._conn.execute(
                "SELECT vector FROM embeddings WHERE model_id = ? AND text_sha = ?",
                (self.model_id, sha),
            ).fetchone()
        if row is None:
            return None
        return np.asarray(json.loads(row[0]), dtype=np.float64)

    def _cache_put(self, sha: str, vector: np.ndarray) -> None:
        if self._conn is None:
            return
        with self._lock:
            self._conn.execute(
                "INSERT OR REPLACE INTO embeddings (model_id, text_sha, vector) "
                "VALUES (?, ?, ?)",
                (self.model_id, sha, json.dumps(vector.tolist())),
            )
            self._conn.commit()

    def _request_vectors(self, texts: list[str]) -> list[list[float]]:
        payload = {"model": self.model_id, "texts": texts}
        last_error: Exception | None = None
        for attempt in range(self.max_attempts):
            try:
                self.request_count += 1
                body = self._post(f"{self.base_url}/embed", payload)
                vectors = body["vectors"]
                if len(vectors) != len(texts):
                    raise EmbeddingError(
                        f"provider returned {len(vectors)} vectors for "
                        f"{len(texts)} texts"
                    )
                return vectors
            except (requests.RequestException, EmbeddingError, KeyError) as exc:
                last_error = exc
                if attempt + 1 < self.max_attempts:
                    self._sleep(self.backoff_s * (2**attempt))
        raise EmbeddingError(f"embedding request failed after "
                             f"{self.max_attempts} attempts: {last_error}")

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        """One vector per text, cache-first. Empty input is a precondition error."""
        if not texts:
            raise ValueError("embed() requires at least one text")
        shas = [_text_sha(t) for t in texts]
        resolved: dict[int, np.ndarray] = {}
        missing: list[int] = []
        for i, sha in enumerate(shas):
            cached = self._cache_get(sha)
            if cached is not None:
                resolved[i] = cached
            else:
                missing.append(i)
        if missing:
            vectors = self._request_vectors([texts[i] for i in missing])
            for i, vector in zip(missing, vectors):
                array = np.asarray(vector, dtype=np.float64)
                if array.ndim != 1 or array.shape[0] != self.dim:
                    raise EmbeddingError(
                        f"provider returned dimension {array.shape}, "
                        f"expected ({self.dim},)"
                    )
                self._cache_put(shas[i], array)
                resolved[i] = array
        for i, sha in enumerate(shas):
            vec = resolved[i]
            if vec.shape[0] != self.dim:
                raise EmbeddingError(
                    f"cached vector dimension {vec.shape[0]} != configured {self.dim}"
                )
        return np.stack([resolved[i] for i in range(len(texts))])

    def close(self) -> None:
        with self._lock:
            if self._conn is not None:
                self._conn.close()
                self._conn = None
