"""Assemble per-(repo, retriever, judge) agreement reports and render tables."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from searchbench.metrics.agreement import (
    CrossTab,
    cohen_kappa,
    cross_tab,
    kendall_tau_b,
    round_half_up,
    spearman_rho,
)
from searchbench.metrics.ranking import map_at_k, rbo_at_k

RBO_PERSISTENCE = 0.9
REPORT_DEPTH = 10
# Rendered precision: ratios carry 5 decimals, percentages 2.
METRIC_PLACES = 5


@dataclass(frozen=True)
class AgreementReport:
    """Agreement metrics between two label sources on one snapshot set."""

    repo: str
    retriever: str
    source_a: str
    source_b: str
    cross_tab: CrossTab
    kappa: float | None
    kendall_tau: float | None
    spearman_rho: float | None
    rbo_at_10: float | None
    map_at_10: float
    query_count: int
    zero_relevant_queries: int
    excluded_pairs: int


def _resorted(
    entities: Sequence[str],
    labels: Mapping[tuple[str, str], int],
    query_id: str,
) -> list[str]:
    # Stable sort: relevant results first, original rank preserved within
    # each label group.
    return sorted(entities, key=lambda eid: -labels[(query_id, eid)])


def build_report(
    snapshots: Mapping[str, Sequence[str]],
    labels_a: Mapping[tuple[str, str], int],
    labels_b: Mapping[tuple[str, str], int],
    *,
    repo: str,
    retriever: str,
    source_a: str,
    source_b: str,
    p: float = RBO_PERSISTENCE,
    k: int = REPORT_DEPTH,
) -> AgreementReport:
    """Compute every agreement metric over snapshotted ranked lists.

    ``snapshots`` maps query_id to the frozen ranked entity ids the
    annotators saw. ``labels_a``/``labels_b`` map (query_id, entity_id) to
    an effective binary label. Pairs missing a label on either side are
    excluded from the cross-tab, correlations, and RBO, and counted in
    ``excluded_pairs``. MAP uses source A (the human side) over the full
    snapshot lists, unlabeled results counting as not relevant.
    """
    seq_a: list[int] = []
    seq_b: list[int] = []
    excluded = 0
    rbo_values: list[float] = []

    for query_id in sorted(snapshots):
        entities = list(snapshots[query_id])
        both = []
        for entity_id in entities:
            key = (query_id, entity_id)
            if key in labels_a and key in labels_b:
                both.append(entity_id)
                seq_a.append(labels_a[key])
                seq_b.append(labels_b[key])
            else:
                excluded += 1
        if both:
            rbo_values.append(
                rbo_at_k(
                    _resorted(both, labels_a, query_id),
                    _resorted(both, labels_b, query_id),
                    p=p,
                    k=k,
                )
            )

    tab = cross_tab(seq_a, seq_b)
    kappa = cohen_kappa(tab) if tab.total else None
    tau = kendall_tau_b(seq_a, seq_b)
    rho = spearman_rho(seq_a, seq_b)
    rbo = sum(rbo_values) / len(rbo_values) if rbo_values else None
    map_result = map_at_k(snapshots, labels_a, k=k)

    def _round(value: float | None) -> float | None:
        return None if value is None else round_half_up(value, METRIC_PLACES)

    return AgreementReport(
        repo=repo,
        retriever=retriever,
        source_a=source_a,
        source_b=source_b,
        cross_tab=tab,
        kappa=_round(kappa),
        kendall_tau=_round(tau),
        spearman_rho=_round(rho),
        rbo_at_10=_round(rbo),
        map_at_10=round_half_up(map_result.value, METRIC_PLACES),
        query_count=map_result.query_count,
        zero_relevant_queries=map_result.zero_relevant_queries,
        excluded_pairs=excluded,
    )


def report_to_dict(report: AgreementReport) -> dict:
    """Stable machine-readable form of an AgreementReport."""
    return {
        "repo": report.repo,
        "retriever": report.retriever,
        "source_a": report.source_a,
        "source_b": report.source_b,
        "cross_tab": report.cross_tab.as_dict(),
        "percent_agreement": report.cross_tab.percent_agreement,
        "kappa": report.kappa,
        "kendall_tau": report.kendall_tau,
        "spearman_rho": report.spearman_rho,
        "rbo_at_10": report.rbo_at_10,
        "map_at_10": report.map_at_10,
        "query_count": report.query_count,
        "zero_relevant_queries": report.zero_relevant_queries,
        "excluded_pairs": report.excluded_pairs,
    }


def _fmt(value: float | None, places: int = METRIC_PLACES) -> str:
    if value is None:
        return "n/a"
    return f"{value:.{places}f}"


def render_report_table(reports: Sequence[AgreementReport]) -> str:
    """Aligned text table: one row per repo/language.

    Columns are kappa, tau-b, rho, RBO@10, and MAP@10; tau and rho are
    reported separately because a combined column would be ambiguous.
    """
    if not reports:
        return "(no reports)\n"
    header = reports[0]
    lines = [
        f"retriever: {header.retriever}   judge: {header.source_b}   "
        f"human: {header.source_a}",
        f"{'language':<14}{'kappa':>10}{'tau-b':>10}{'rho':>10}"
        f"{'RBO@10':>10}{'MAP@10':>10}{'agree%':>9}",
    ]
    for rep in reports:
        pct = rep.cross_tab.percent_agreement
        lines.append(
            f"{rep.repo:<14}"
            f"{_fmt(rep.kappa):>10}"
            f"{_fmt(rep.kendall_tau):>10}"
            f"{_fmt(rep.spearman_rho):>10}"
            f"{_fmt(rep.rbo_at_10):>10}"
            f"{_fmt(rep.map_at_10):>10}"
            f"{_fmt(pct, 2):>9}"
        )
    return "\n".join(lines) + "\n"


def render_crosstab_table(tab: CrossTab, *, row_source: str, col_source: str) -> str:
    """Confusion-matrix layout with percent agreement in the bottom-left."""
    pct = tab.percent_agreement
    pct_text = "n/a" if pct is None else f"{pct:.2f}%"
    width = max(
        8,
        *(len(str(v)) for v in (tab.n00, tab.n01, tab.n10, tab.n11, tab.total)),
        len(pct_text),
    )
    rows = [
        f"rows: {row_source}   columns: {col_source}",
        f"{'':<{width}} {'not-rel':>{width}} {'relevant':>{width}} {'':>{width}}",
        f"{'not-rel':<{width}} {tab.n00:>{width}} {tab.n01:>{width}} {tab.row0:>{width}}",
        f"{'relevant':<{width}} {tab.n10:>{width}} {tab.n11:>{width}} {tab.row1:>{width}}",
        f"{pct_text:<{width}} {tab.col0:>{width}} {tab.col1:>{width}} {tab.total:>{width}}",
    ]
    return "\n".join(rows) + "\n"
