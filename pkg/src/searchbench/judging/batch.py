"""File-based batch judging pathway.

Requests go out as one JSONL file ({custom_id, prompt} per line); responses
come back as another ({custom_id, response}). The poll step ingests whatever
responses exist, so a partially completed batch can be re-polled, and pairs
already judged are skipped on re-runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from searchbench.judging.engine import JudgeVerdict, judge_pair


@dataclass(frozen=True)
class BatchPair:
    custom_id: str
    query_id: str
    entity_id: str
    prompt: str


@dataclass
class BatchReport:
    judged: list[JudgeVerdict] = field(default_factory=list)
    errors: list[JudgeVerdict] = field(default_factory=list)
    skipped_existing: int = 0
    pending: list[str] = field(default_factory=list)  # custom_ids awaiting response

    @property
    def error_count(self) -> int:
        return len(self.errors)


def make_custom_id(query_id: str, entity_id: str) -> str:
    return f"{query_id}::{entity_id}"


def split_custom_id(custom_id: str) -> tuple[str, str]:
    query_id, _, entity_id = custom_id.partition("::")
    return query_id, entity_id


def write_batch_requests(path: Path | str, pairs: Sequence[BatchPair]) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for pair in pairs:
            handle.write(
                json.dumps(
                    {"custom_id": pair.custom_id, "prompt": pair.prompt},
                    ensure_ascii=False,
                )
                + "\n"
            )
    return len(pairs)


def read_batch_responses(path: Path | str) -> dict[str, str]:
    responses: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            if "custom_id" not in record or "response" not in record:
                raise ValueError(f"{path}:{line_no}: need custom_id and response")
            response = record["response"]
            if not isinstance(response, str):
                response = json.dumps(response, ensure_ascii=False)
            responses[record["custom_id"]] = response
    return responses


def judge_batch(
    pairs: Sequence[BatchPair],
    responses: dict[str, str],
    *,
    model_id: str,
    max_retries: int = 3,
    already_judged: Callable[[str, str], bool] | None = None,
) -> BatchReport:
    """Fold one round of batch responses into verdicts.

    Pairs the store already has verdicts for are skipped (idempotent
    re-runs); pairs without a response yet stay pending for the next poll.
    Responses that never parse become error verdicts exactly like the
    synchronous path. A batch response is a single fixed string, so the
    parse either succeeds first try or exhausts the budget immediately.
    """
    if not pairs:
        raise ValueError("judge_batch requires at least one pair")
    report = BatchReport()
    for pair in pairs:
        if already_judged and already_judged(pair.query_id, pair.entity_id):
            report.skipped_existing += 1
            continue
        if pair.custom_id not in responses:
            report.pending.append(pair.custom_id)
            continue
        raw = responses[pair.custom_id]
        verdict = judge_pair(
            lambda _prompt, raw=raw: raw,
            pair.prompt,
            query_id=pair.query_id,
            entity_id=pair.entity_id,
            model_id=model_id,
            max_retries=max_retries,
        )
        if verdict.ok:
            report.judged.append(verdict)
        else:
            report.errors.append(verdict)
    return report
