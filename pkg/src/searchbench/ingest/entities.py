"""Corpus records: content-addressed function entities, JSONL IO, statistics."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Iterable, Sequence

from searchbench.retrieval.tokenize import tokenize

# Exact key order of the corpus wire format.
CORPUS_FIELDS = (
    "entity_id",
    "repo",
    "rel_path",
    "function_name",
    "code",
    "docstring",
    "start_line",
    "end_line",
)


@dataclass(frozen=True)
class CodeEntity:
    entity_id: str
    repo: str
    rel_path: str
    function_name: str
    code: str
    docstring: str
    start_line: int
    end_line: int


def entity_identity(repo: str, rel_path: str, start_line: int, code: str) -> str:
    """Stable content hash; unchanged across re-indexing of the same tree."""
    payload = "\x00".join((repo, rel_path, str(start_line), code))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def make_entity(
    repo: str,
    rel_path: str,
    function_name: str,
    code: str,
    docstring: str,
    start_line: int,
    end_line: int,
) -> CodeEntity:
    if not code:
        raise ValueError(f"{repo}:{rel_path}: empty code for {function_name}")
    if start_line > end_line:
        raise ValueError(
            f"{repo}:{rel_path}:{function_name}: start {start_line} > end {end_line}"
        )
    return CodeEntity(
        entity_id=entity_identity(repo, rel_path, start_line, code),
        repo=repo,
        rel_path=rel_path,
        function_name=function_name,
        code=code,
        docstring=docstring,
        start_line=start_line,
        end_line=end_line,
    )


def write_corpus(entities: Sequence[CodeEntity], out: Path | str) -> int:
    """One JSON object per line, UTF-8, LF; byte-identical for equal inputs.

    Written through a temp file and renamed so an I/O failure never leaves a
    truncated corpus behind.
    """
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    tmp = out.with_name(out.name + ".tmp")
    try:
        with open(tmp, "w", encoding="utf-8", newline="\n") as handle:
            for entity in entities:
                record = {field: getattr(entity, field) for field in CORPUS_FIELDS}
                handle.write(json.dumps(record, ensure_ascii=False) + "\n")
        os.replace(tmp, out)
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise
    return len(entities)


def read_corpus(path: Path | str) -> list[CodeEntity]:
    entities = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            missing = [f for f in CORPUS_FIELDS if f not in record]
            if missing:
                raise ValueError(f"{path}:{line_no}: missing fields {missing}")
            entities.append(CodeEntity(**{f: record[f] for f in CORPUS_FIELDS}))
    return entities


@dataclass(frozen=True)
class CorpusStats:
    function_count: int
    lines_of_code: int
    doc_token_count: int
    code_token_count: int
    pct_docs_absent: float


def compute_stats(entities: Iterable[CodeEntity]) -> CorpusStats:
    """Corpus summary; token counts use the sparse-index tokenizer so the
    numbers stay comparable with what the index sees."""
    function_count = 0
    lines = 0
    doc_tokens = 0
    code_tokens = 0
    docs_absent = 0
    for entity in entities:
        function_count += 1
        lines += entity.code.count("\n") + 1
        doc_tokens += len(tokenize(entity.docstring))
        code_tokens += len(tokenize(entity.code))
        if not entity.docstring:
            docs_absent += 1
    if function_count == 0:
        pct_absent = 0.0
    else:
        pct = Decimal(100 * docs_absent) / Decimal(function_count)
        pct_absent = float(pct.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))
    return CorpusStats(
        function_count=function_count,
        lines_of_code=lines,
        doc_token_count=doc_tokens,
        code_token_count=code_tokens,
        pct_docs_absent=pct_absent,
    )


def render_stats(stats: CorpusStats) -> str:
    rows = [
        ("# Functions", f"{stats.function_count:,}"),
        ("Lines of Code", f"{stats.lines_of_code:,}"),
        ("# Doc Tokens", f"{stats.doc_token_count:,}"),
        ("# Code Tokens", f"{stats.code_token_count:,}"),
        ("% Docs Absent", f"{stats.pct_docs_absent:.2f}"),
    ]
    width = max(len(label) for label, _ in rows) + 2
    return "\n".join(f"{label:<{width}}{value:>12}" for label, value in rows) + "\n"
