"""Batch transpilation of labeled QA datasets with failure accounting.

Input records carry (id, query, code, label); successes keep the original
query and label with the code replaced by its C translation, failures are
binned by category and by offending node kind.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from searchbench.transpile.core import TranspileResult, transpile_function
from searchbench.transpile.emit import TypeMapping

REQUIRED_FIELDS = ("id", "query", "code", "label")


@dataclass
class FailureStats:
    total_records: int = 0
    transpiled: int = 0
    by_category: Counter = field(default_factory=Counter)
    by_node_kind: Counter = field(default_factory=Counter)

    @property
    def failed(self) -> int:
        return self.total_records - self.transpiled

    def category_percentages(self) -> dict[str, float]:
        """Category share of all failures, full precision."""
        if self.failed == 0:
            return {}
        return {
            cat: 100.0 * count / self.failed
            for cat, count in self.by_category.items()
        }

    def node_kind_percentages(self) -> dict[str, float]:
        total = sum(self.by_node_kind.values())
        if total == 0:
            return {}
        return {
            kind: 100.0 * count / total for kind, count in self.by_node_kind.items()
        }


@dataclass
class DatasetResult:
    successes: list[dict]
    failures: list[dict]
    stats: FailureStats


def read_qa_records(path: Path | str) -> list[dict]:
    """Load a JSONL QA dataset, insisting on the (id, query, code, label) keys."""
    records = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            missing = [key for key in REQUIRED_FIELDS if key not in record]
            if missing:
                raise ValueError(f"{path}:{line_no}: record missing {missing}")
            records.append(record)
    return records


def transpile_dataset(
    records: Iterable[dict], types: TypeMapping | None = None
) -> DatasetResult:
    """Transpile every record; nothing is silently dropped.

    Each record yields either a success entry (id, query, c_code, label) or
    a failure entry (id, category, node_kind, detail).
    """
    stats = FailureStats()
    successes: list[dict] = []
    failures: list[dict] = []
    for record in records:
        stats.total_records += 1
        result: TranspileResult = transpile_function(record["code"], types)
        if result.ok:
            stats.transpiled += 1
            successes.append(
                {
                    "id": record["id"],
                    "query": record["query"],
                    "c_code": result.c_source,
                    "label": record["label"],
                }
            )
        else:
            stats.by_category[result.category] += 1
            if result.node_kind:
                stats.by_node_kind[result.node_kind] += 1
            failures.append(
                {
                    "id": record["id"],
                    "category": result.category,
                    "node_kind": result.node_kind,
                    "detail": result.detail,
                }
            )
    return DatasetResult(successes=successes, failures=failures, stats=stats)


def stats_to_dict(stats: FailureStats) -> dict:
    category_pct = stats.category_percentages()
    node_pct = stats.node_kind_percentages()
    return {
        "total_records": stats.total_records,
        "transpiled": stats.transpiled,
        "failed": stats.failed,
        "transpiled_pct_of_total": (
            100.0 * stats.transpiled / stats.total_records
            if stats.total_records
            else 0.0
        ),
        "categories": {
            cat: {"count": stats.by_category[cat], "pct_of_failures": category_pct[cat]}
            for cat in sorted(stats.by_category)
        },
        "node_kinds": {
            kind: {"count": stats.by_node_kind[kind], "pct": node_pct[kind]}
            for kind in sorted(stats.by_node_kind)
        },
    }


def _histogram_table(
    title: str, first_column: str, rows: list[tuple[str, int, float]]
) -> str:
    width = max([len(first_column)] + [len(name) for name, _, _ in rows]) + 2
    lines = [title, f"{first_column:<{width}}{'Frequency':>12}{'%-of Total':>12}"]
    total_count = 0
    for name, count, pct in rows:
        total_count += count
        lines.append(f"{name:<{width}}{count:>12}{pct:>12.1f}")
    lines.append(f"{'Total':<{width}}{total_count:>12}{100.0:>12.1f}")
    return "\n".join(lines) + "\n"


def render_category_table(stats: FailureStats) -> str:
    pct = stats.category_percentages()
    rows = [
        (cat, count, pct[cat])
        for cat, count in sorted(
            stats.by_category.items(), key=lambda item: (-item[1], item[0])
        )
    ]
    return _histogram_table("Transpilation failure categories", "Category", rows)


def render_node_kind_table(stats: FailureStats) -> str:
    pct = stats.node_kind_percentages()
    rows = [
        (kind, count, pct[kind])
        for kind, count in sorted(
            stats.by_node_kind.items(), key=lambda item: (-item[1], item[0])
        )
    ]
    return _histogram_table("Unsupported node kinds", "Node Type", rows)


def write_dataset_outputs(result: DatasetResult, out_dir: Path | str) -> None:
    """transpiled.jsonl + failures.jsonl + stats.json under out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "transpiled.jsonl", "w", encoding="utf-8") as handle:
        for record in result.successes:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
    with open(out / "failures.jsonl", "w", encoding="utf-8") as handle:
        for record in result.failures:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
    with open(out / "stats.json", "w", encoding="utf-8") as handle:
        json.dump(stats_to_dict(result.stats), handle, indent=2, sort_keys=True)
        handle.write("\n")
