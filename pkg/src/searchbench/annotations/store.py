"""Append-only annotation store over a single-file SQLite database.

Labels are never updated or deleted; the effective label for an
(annotator, query, entity) key is the most recently timestamped record,
which is how corrections work. Timestamps are wall-clock milliseconds forced
strictly monotone within a process so local latest-wins is total; records
arriving via merge keep their original timestamps and identical records
deduplicate, making merge idempotent, commutative, and associative.
"""

from __future__ import annotations

import hashlib
import json
import sqlite3
import threading
import time
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from searchbench.retrieval.types import RankedResult

_SCHEMA = """
CREATE TABLE IF NOT EXISTS queries (
    query_id TEXT PRIMARY KEY,
    text TEXT NOT NULL,
    repo TEXT NOT NULL,
    retriever TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS snapshots (
    query_id TEXT NOT NULL,
    rank INTEGER NOT NULL,
    entity_id TEXT NOT NULL,
    score REAL NOT NULL,
    PRIMARY KEY (query_id, rank)
);
CREATE TABLE IF NOT EXISTS labels (
    annotator_id TEXT NOT NULL,
    query_id TEXT NOT NULL,
    entity_id TEXT NOT NULL,
    label INTEGER NOT NULL CHECK (label IN (0, 1)),
    timestamp_ms INTEGER NOT NULL,
    source TEXT NOT NULL CHECK (source IN ('human', 'llm')),
    UNIQUE (annotator_id, query_id, entity_id, label, timestamp_ms, source)
);
"""

EXPORT_FIELDS = (
    "annotator_id",
    "query_id",
    "entity_id",
    "label",
    "timestamp_ms",
    "source",
)


class ConflictError(Exception):
    """Snapshot content diverged for an existing query_id."""


class ReferentialError(Exception):
    """Label references a query or entity with no stored snapshot."""


def normalize_query(text: str) -> str:
    return unicodedata.normalize("NFC", text).strip()


def query_identity(repo: str, retriever_fingerprint: str, text: str) -> str:
    payload = "\x00".join((repo, retriever_fingerprint, normalize_query(text)))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class QueryRecord:
    query_id: str
    text: str
    repo: str
    retriever: str  # retriever fingerprint, not display name


@dataclass(frozen=True)
class RelevanceLabel:
    annotator_id: str
    query_id: str
    entity_id: str
    label: int
    timestamp_ms: int
    source: str  # "human" | "llm"


# Alias kept for readers scanning the wire format: stored and exported
# records carry exactly the RelevanceLabel fields.
StoredLabel = RelevanceLabel


def _synchronized(method):
    """All store access funnels through one reentrant lock (single-writer
    discipline; SQLite connections are not thread-safe by themselves)."""

    def wrapper(self, *args, **kwargs):
        with self._lock:
            return method(self, *args, **kwargs)

    wrapper.__name__ = method.__name__
    wrapper.__doc__ = method.__doc__
    return wrapper


class AnnotationStore:
    """Thread-safe via one coarse lock: the service serializes store access,
    which a single-file SQLite database wants anyway."""

    def __init__(self, path: Path | str):
        self.path = Path(path)
        if self.path.parent != Path("."):
            self.path.parent.mkdir(parents=True, exist_ok=True)
        # The HTTP layer dispatches handlers across worker threads; the lock
        # below is the single-writer discipline.
        self._conn = sqlite3.connect(self.path, check_same_thread=False)
        self._lock = threading.RLock()
        self._conn.executescript(_SCHEMA)
        self._conn.commit()
        self._last_ms = 0

    def close(self) -> None:
        with self._lock:
            self._conn.close()

    def __enter__(self) -> "AnnotationStore":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    # -- clock -----------------------------------------------------------

    def _now_ms(self) -> int:
        with self._lock:
            now = time.time_ns() // 1_000_000
            persisted = self._conn.execute(
                "SELECT COALESCE(MAX(timestamp_ms), 0) FROM labels"
            ).fetchone()[0]
            now = max(now, self._last_ms + 1, persisted + 1)
            self._last_ms = now
            return now

    # -- queries and snapshots --------------------------------------------

    @_synchronized
    def upsert_query(self, record: QueryRecord) -> None:
        existing = self._conn.execute(
            "SELECT text, repo, retriever FROM queries WHERE query_id = ?",
            (record.query_id,),
        ).fetchone()
        if existing is None:
            self._conn.execute(
                "INSERT INTO queries (query_id, text, repo, retriever) "
                "VALUES (?, ?, ?, ?)",
                (record.query_id, record.text, record.repo, record.retriever),
            )
            self._conn.commit()
        elif existing != (record.text, record.repo, record.retriever):
            raise ConflictError(
                f"query {record.query_id} already stored with different metadata"
            )

    @_synchronized
    def snapshot_results(
        self, record: QueryRecord, results: Sequence[RankedResult]
    ) -> None:
        """Freeze the ranked list an annotator saw.

        Idempotent for identical content; a different list for the same
        query_id means the index or corpus changed under unmerged labels,
        which is a hard conflict rather than a silent overwrite.
        """
        self.upsert_query(record)
        new_rows = [(record.query_id, r.rank, r.entity_id, r.score) for r in results]
        existing = self._conn.execute(
            "SELECT query_id, rank, entity_id, score FROM snapshots "
            "WHERE query_id = ? ORDER BY rank",
            (record.query_id,),
        ).fetchall()
        if existing:
            if [tuple(row) for row in existing] != new_rows:
                raise ConflictError(
                    f"snapshot for query {record.query_id} diverges from the "
                    "stored listing (corpus or retriever changed)"
                )
            return
        self._conn.executemany(
            "INSERT INTO snapshots (query_id, rank, entity_id, score) "
            "VALUES (?, ?, ?, ?)",
            new_rows,
        )
        self._conn.commit()

    @_synchronized
    def snapshot(self, query_id: str) -> list[RankedResult]:
        rows = self._conn.execute(
            "SELECT entity_id, rank, score FROM snapshots "
            "WHERE query_id = ? ORDER BY rank",
            (query_id,),
        ).fetchall()
        return [RankedResult(entity_id=e, rank=r, score=s) for e, r, s in rows]

    @_synchronized
    def queries_for(self, repo: str, retriever: str) -> list[QueryRecord]:
        rows = self._conn.execute(
            "SELECT query_id, text, repo, retriever FROM queries "
            "WHERE repo = ? AND retriever = ? ORDER BY query_id",
            (repo, retriever),
        ).fetchall()
        return [QueryRecord(*row) for row in rows]

    @_synchronized
    def get_query(self, query_id: str) -> QueryRecord | None:
        row = self._conn.execute(
            "SELECT query_id, text, repo, retriever FROM queries WHERE query_id = ?",
            (query_id,),
        ).fetchone()
        return QueryRecord(*row) if row else None

    # -- labels ------------------------------------------------------------

    @_synchronized
    def record_label(
        self,
        annotator_id: str,
        query_id: str,
        entity_id: str,
        label: int,
        source: str = "human",
    ) -> RelevanceLabel:
        """Append one judgment; the previous records for the key remain."""
        if label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {label!r}")
        known = self._conn.execute(
            "SELECT 1 FROM snapshots WHERE query_id = ? AND entity_id = ?",
            (query_id, entity_id),
        ).fetchone()
        if known is None:
            raise ReferentialError(
                f"no snapshot holds (query={query_id}, entity={entity_id})"
            )
        stored = RelevanceLabel(
            annotator_id=annotator_id,
            query_id=query_id,
            entity_id=entity_id,
            label=label,
            timestamp_ms=self._now_ms(),
            source=source,
        )
        self._insert_label(stored)
        return stored

    def _insert_label(self, record: RelevanceLabel) -> None:
        self._conn.execute(
            "INSERT OR IGNORE INTO labels "
            "(annotator_id, query_id, entity_id, label, timestamp_ms, source) "
            "VALUES (?, ?, ?, ?, ?, ?)",
            (
                record.annotator_id,
                record.query_id,
                record.entity_id,
                record.label,
                record.timestamp_ms,
                record.source,
            ),
        )
        self._conn.commit()

    @_synchronized
    def label_log(self, annotator_id: str | None = None) -> list[RelevanceLabel]:
        sql = (
            "SELECT annotator_id, query_id, entity_id, label, timestamp_ms, source "
            "FROM labels"
        )
        params: tuple = ()
        if annotator_id is not None:
            sql += " WHERE annotator_id = ?"
            params = (annotator_id,)
        sql += " ORDER BY timestamp_ms, annotator_id, query_id, entity_id, label"
        return [RelevanceLabel(*row) for row in self._conn.execute(sql, params)]

    @_synchronized
    def effective_labels(
        self, annotator_id: str, query_id: str | None = None
    ) -> dict[tuple[str, str], RelevanceLabel]:
        """Latest-wins view: one label per (query, entity) for an annotator.

        Ties on timestamp (possible only across merged stores) resolve to
        the higher label so the outcome is order-independent.
        """
        sql = (
            "SELECT annotator_id, query_id, entity_id, label, timestamp_ms, source "
            "FROM labels WHERE annotator_id = ?"
        )
        params: list = [annotator_id]
        if query_id is not None:
            sql += " AND query_id = ?"
            params.append(query_id)
        effective: dict[tuple[str, str], RelevanceLabel] = {}
        for row in self._conn.execute(sql, params):
            record = RelevanceLabel(*row)
            key = (record.query_id, record.entity_id)
            current = effective.get(key)
            if current is None or (record.timestamp_ms, record.label) > (
                current.timestamp_ms,
                current.label,
            ):
                effective[key] = record
        return effective

    @_synchronized
    def annotators(self) -> list[tuple[str, str]]:
        rows = self._conn.execute(
            "SELECT DISTINCT annotator_id, source FROM labels "
            "ORDER BY annotator_id, source"
        ).fetchall()
        return [tuple(row) for row in rows]

    @_synchronized
    def has_label(self, annotator_id: str, query_id: str, entity_id: str) -> bool:
        row = self._conn.execute(
            "SELECT 1 FROM labels WHERE annotator_id = ? AND query_id = ? "
            "AND entity_id = ? LIMIT 1",
            (annotator_id, query_id, entity_id),
        ).fetchone()
        return row is not None

    # -- export / merge -----------------------------------------------------

    @_synchronized
    def export_annotations(
        self, out: Path | str, annotator_id: str | None = None
    ) -> int:
        """Full label log (not just effective view) as JSONL."""
        records = self.label_log(annotator_id)
        out = Path(out)
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", encoding="utf-8", newline="\n") as handle:
            for record in records:
                handle.write(
                    json.dumps(
                        {field: getattr(record, field) for field in EXPORT_FIELDS},
                        ensure_ascii=False,
                    )
                    + "\n"
                )
        return len(records)

    @_synchronized
    def merge_annotations(self, source: Path | str | Iterable[dict]) -> int:
        """Union another store's exported label log into this one.

        Per-record dedupe keeps the merge idempotent; per-annotator
        latest-wins is preserved because original timestamps are kept. An
        annotator id appearing with two different sources (human and llm)
        is an identity collision and aborts before any insert.
        """
        if isinstance(source, (str, Path)):
            with open(source, encoding="utf-8") as handle:
                records = [json.loads(line) for line in handle if line.strip()]
        else:
            records = list(source)
        incoming: list[RelevanceLabel] = []
        for i, raw in enumerate(records):
            missing = [f for f in EXPORT_FIELDS if f not in raw]
            if missing:
                raise ValueError(f"import record {i} missing fields {missing}")
            if raw["label"] not in (0, 1):
                raise ValueError(f"import record {i}: label must be 0/1")
            if raw["source"] not in ("human", "llm"):
                raise ValueError(f"import record {i}: bad source {raw['source']!r}")
            incoming.append(
                RelevanceLabel(**{f: raw[f] for f in EXPORT_FIELDS})
            )
        local_sources = dict(self.annotators())
        collisions = sorted(
            {
                record.annotator_id
                for record in incoming
                if local_sources.get(record.annotator_id, record.source)
                != record.source
            }
        )
        if collisions:
            raise ConflictError(
                f"annotator identity collision (human vs llm): {collisions}"
            )
        before = self._conn.execute("SELECT COUNT(*) FROM labels").fetchone()[0]
        for record in incoming:
            self._insert_label(record)
        after = self._conn.execute("SELECT COUNT(*) FROM labels").fetchone()[0]
        return after - before
