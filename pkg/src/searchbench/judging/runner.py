"""Store-backed judging: walk snapshots, judge pairs, record labels.

The judge model acts as one more annotator: successful verdicts land in the
annotation store under annotator_id = model_id with source "llm". Error
verdicts are never recorded as labels; they are counted and reported so a
re-run can retry exactly those pairs.

Synchronous runs keep a bounded number of provider requests in flight
(default 4); verdict writes always serialize through the annotation store,
so the stored outcome is independent of completion order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping

DEFAULT_CONCURRENCY = 4

from searchbench.annotations.store import AnnotationStore
from searchbench.ingest.entities import CodeEntity
from searchbench.judging.batch import (
    BatchPair,
    BatchReport,
    judge_batch,
    make_custom_id,
    write_batch_requests,
)
from searchbench.judging.engine import JudgeVerdict, judge_pair
from searchbench.judging.prompts import JudgeConfig, render_prompt


@dataclass
class JudgeRunReport:
    judged: int = 0
    skipped_existing: int = 0
    errors: list[JudgeVerdict] = field(default_factory=list)
    truncated_passages: int = 0
    missing_entities: list[str] = field(default_factory=list)

    @property
    def error_count(self) -> int:
        return len(self.errors)


def _snapshot_pairs(
    store: AnnotationStore,
    entities: Mapping[str, CodeEntity],
    config: JudgeConfig,
    repo: str,
    retriever_fp: str,
) -> tuple[list[BatchPair], JudgeRunReport]:
    report = JudgeRunReport()
    pairs: list[BatchPair] = []
    for query in store.queries_for(repo, retriever_fp):
        for result in store.snapshot(query.query_id):
            entity = entities.get(result.entity_id)
            if entity is None:
                report.missing_entities.append(result.entity_id)
                continue
            rendered = render_prompt(
                config, query.text, entity.docstring, entity.code
            )
            if rendered.truncated:
                report.truncated_passages += 1
            pairs.append(
                BatchPair(
                    custom_id=make_custom_id(query.query_id, result.entity_id),
                    query_id=query.query_id,
                    entity_id=result.entity_id,
                    prompt=rendered.text,
                )
            )
    return pairs, report


def judge_snapshots(
    store: AnnotationStore,
    entities: Mapping[str, CodeEntity],
    config: JudgeConfig,
    *,
    repo: str,
    retriever_fp: str,
    provider: Callable[[str], str],
    concurrency: int = DEFAULT_CONCURRENCY,
) -> JudgeRunReport:
    """Judge every snapshotted (query, entity) pair not yet labeled.

    Idempotent: pairs the model has already labeled are skipped, so an
    interrupted run resumes where it stopped. Up to `concurrency` provider
    requests run in flight; results are recorded in pair order.
    """
    pairs, report = _snapshot_pairs(store, entities, config, repo, retriever_fp)
    todo = []
    for pair in pairs:
        if store.has_label(config.model_id, pair.query_id, pair.entity_id):
            report.skipped_existing += 1
        else:
            todo.append(pair)

    def run_one(pair: BatchPair):
        return judge_pair(
            provider,
            pair.prompt,
            query_id=pair.query_id,
            entity_id=pair.entity_id,
            model_id=config.model_id,
            max_retries=config.max_retries,
        )

    if not todo:
        return report
    if concurrency <= 1:
        verdicts = [run_one(pair) for pair in todo]
    else:
        with ThreadPoolExecutor(max_workers=concurrency) as pool:
            verdicts = list(pool.map(run_one, todo))
    for pair, verdict in zip(todo, verdicts):
        if verdict.ok:
            store.record_label(
                annotator_id=config.model_id,
                query_id=pair.query_id,
                entity_id=pair.entity_id,
                label=verdict.binary,
                source="llm",
            )
            report.judged += 1
        else:
            report.errors.append(verdict)
    return report


def judge_snapshots_batch(
    store: AnnotationStore,
    entities: Mapping[str, CodeEntity],
    config: JudgeConfig,
    *,
    repo: str,
    retriever_fp: str,
    responses: dict[str, str] | None,
    requests_path,
) -> tuple[JudgeRunReport, BatchReport | None]:
    """Batch pathway: write the request file, ingest any available responses.

    With no responses yet, only the request file is produced; re-running
    with a (partial) response file ingests what exists and leaves the rest
    pending.
    """
    pairs, report = _snapshot_pairs(store, entities, config, repo, retriever_fp)
    todo = [
        p
        for p in pairs
        if not store.has_label(config.model_id, p.query_id, p.entity_id)
    ]
    report.skipped_existing = len(pairs) - len(todo)
    write_batch_requests(requests_path, todo)
    if responses is None or not todo:
        return report, None
    batch_report = judge_batch(
        todo,
        responses,
        model_id=config.model_id,
        max_retries=config.max_retries,
    )
    for verdict in batch_report.judged:
        store.record_label(
            annotator_id=config.model_id,
            query_id=verdict.query_id,
            entity_id=verdict.entity_id,
            label=verdict.binary,
            source="llm",
        )
        report.judged += 1
    report.errors.extend(batch_report.errors)
    return report, batch_report
