"""Cross-language benchmark bootstrap.

Pipeline: transpile a labeled QA dataset into C, send each surviving
(query, C code) pair to the judge, and cross-tabulate the judge's binary
verdicts (columns) against the original human labels (rows). The judge only
ever sees the translated code, never the source-language original.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from searchbench.judging.engine import judge_pair
from searchbench.judging.prompts import JudgeConfig, render_prompt
from searchbench.metrics.agreement import CrossTab
from searchbench.metrics.report import render_crosstab_table
from searchbench.transpile.dataset import transpile_dataset, write_dataset_outputs
from searchbench.transpile.emit import TypeMapping

_VERDICTS_FILE = "verdicts.jsonl"
_CROSSTAB_JSON = "crosstab.json"
_CROSSTAB_TXT = "crosstab.txt"
_SKIPPED_FILE = "skipped.jsonl"


@dataclass(frozen=True)
class BootstrapRun:
    dataset_id: str
    model_id: str
    counts: CrossTab
    skipped: int  # transpile failures
    judge_errors: int

    @property
    def judged(self) -> int:
        return self.counts.total


def _load_existing_verdicts(path: Path) -> dict[str, dict]:
    if not path.exists():
        return {}
    verdicts = {}
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                record = json.loads(line)
                verdicts[record["id"]] = record
    return verdicts


def run_bootstrap(
    records: Sequence[dict],
    judge_config: JudgeConfig,
    types: TypeMapping | None = None,
    *,
    provider: Callable[[str], str],
    run_dir: Path | str,
    dataset_id: str = "dataset",
) -> BootstrapRun:
    """Transpile, judge, cross-tabulate; everything accounted, nothing dropped.

    Resumable: verdicts stream to run_dir/verdicts.jsonl as they arrive and
    already-judged record ids are skipped on re-entry, so a re-run with the
    same provider transcript reproduces identical outputs.
    """
    run_dir = Path(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)

    dataset_result = transpile_dataset(records, types)
    write_dataset_outputs(dataset_result, run_dir)
    with open(run_dir / _SKIPPED_FILE, "w", encoding="utf-8", newline="\n") as handle:
        for failure in dataset_result.failures:
            handle.write(json.dumps(failure, ensure_ascii=False) + "\n")

    verdict_path = run_dir / _VERDICTS_FILE
    existing = _load_existing_verdicts(verdict_path)
    with open(verdict_path, "a", encoding="utf-8", newline="\n") as handle:
        for success in dataset_result.successes:
            record_id = str(success["id"])
            if record_id in existing:
                continue
            rendered = render_prompt(
                judge_config, success["query"], "", success["c_code"]
            )
            verdict = judge_pair(
                provider,
                rendered.text,
                query_id=record_id,
                entity_id=record_id,
                model_id=judge_config.model_id,
                max_retries=judge_config.max_retries,
            )
            stored = {
                "id": record_id,
                "grade": verdict.grade,
                "binary": verdict.binary,
                "error": verdict.error,
            }
            handle.write(json.dumps(stored, ensure_ascii=False) + "\n")
            existing[record_id] = stored

    cells = {"n00": 0, "n01": 0, "n10": 0, "n11": 0}
    judge_errors = 0
    for success in dataset_result.successes:
        verdict = existing[str(success["id"])]
        if verdict["error"] is not None:
            judge_errors += 1
            continue
        human = int(success["label"])
        model = int(verdict["binary"])
        cells[f"n{human}{model}"] += 1
    counts = CrossTab(**cells)
    run = BootstrapRun(
        dataset_id=dataset_id,
        model_id=judge_config.model_id,
        counts=counts,
        skipped=len(dataset_result.failures),
        judge_errors=judge_errors,
    )
    _write_reports(run, run_dir)
    return run


def _write_reports(run: BootstrapRun, run_dir: Path) -> None:
    payload = {
        "dataset_id": run.dataset_id,
        "model_id": run.model_id,
        "cross_tab": run.counts.as_dict(),
        "percent_agreement": run.counts.percent_agreement,
        "skipped": run.skipped,
        "judge_errors": run.judge_errors,
    }
    with open(run_dir / _CROSSTAB_JSON, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
    table = render_crosstab_table(
        run.counts, row_source="human", col_source=run.model_id
    )
    extras = f"skipped(transpile)={run.skipped} judge_errors={run.judge_errors}\n"
    (run_dir / _CROSSTAB_TXT).write_text(table + extras, encoding="utf-8")
