"""Verdict parsing, grade collapse, and the per-pair judging loop."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Callable

GRADES = (0, 1, 2, 3)


@dataclass(frozen=True)
class JudgeVerdict:
    query_id: str
    entity_id: str
    grade: int | None  # None on judge_error
    binary: int | None
    raw_response: str
    model_id: str
    latency_ms: int
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def collapse_grade(grade: int) -> int:
    """Binary label: 0 stays 0, every non-zero grade becomes 1."""
    if grade not in GRADES:
        raise ValueError(f"grade must be in {GRADES}, got {grade!r}")
    return 0 if grade == 0 else 1


def parse_verdict(raw: str) -> int:
    """Strict structured parse: a JSON object with integer field `relevance`.

    No free-text salvage: anything else raises and counts toward the retry
    budget.
    """
    data = json.loads(raw)
    if not isinstance(data, dict) or "relevance" not in data:
        raise ValueError("response object missing 'relevance'")
    grade = data["relevance"]
    if isinstance(grade, bool) or not isinstance(grade, int):
        raise ValueError(f"relevance must be an integer, got {grade!r}")
    if grade not in GRADES:
        raise ValueError(f"relevance {grade} outside 0-3")
    return grade


def judge_pair(
    provider: Callable[[str], str],
    prompt: str,
    *,
    query_id: str,
    entity_id: str,
    model_id: str,
    max_retries: int = 3,
    clock: Callable[[], float] = time.monotonic,
) -> JudgeVerdict:
    """Ask the provider until a parseable verdict or the retry budget is spent.

    An exhausted budget produces an error verdict (grade None) that callers
    exclude from metrics and count, rather than an exception.
    """
    start = clock()
    raw = ""
    last_error = "no attempts made"
    for _ in range(max(1, max_retries)):
        try:
            raw = provider(prompt)
        except Exception as exc:  # provider transport failure counts as a strike
            last_error = f"provider error: {exc}"
            continue
        try:
            grade = parse_verdict(raw)
        except (ValueError, json.JSONDecodeError) as exc:
            last_error = f"unparseable response: {exc}"
            continue
        return JudgeVerdict(
            query_id=query_id,
            entity_id=entity_id,
            grade=grade,
            binary=collapse_grade(grade),
            raw_response=raw,
            model_id=model_id,
            latency_ms=int((clock() - start) * 1000),
        )
    return JudgeVerdict(
        query_id=query_id,
        entity_id=entity_id,
        grade=None,
        binary=None,
        raw_response=raw,
        model_id=model_id,
        latency_ms=int((clock() - start) * 1000),
        error=last_error,
    )
