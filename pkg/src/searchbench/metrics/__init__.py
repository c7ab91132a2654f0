"""Agreement and ranking-quality metrics between two relevance label sources."""

from searchbench.metrics.agreement import (
    CrossTab,
    cohen_kappa,
    cross_tab,
    kendall_tau_b,
    rank_correlations,
    round_half_up,
    spearman_rho,
)
from searchbench.metrics.ranking import (
    MapResult,
    average_precision_at_k,
    map_at_k,
    rbo_at_k,
)
from searchbench.metrics.report import (
    AgreementReport,
    build_report,
    render_report_table,
    report_to_dict,
)

__all__ = [
    "AgreementReport",
    "CrossTab",
    "MapResult",
    "average_precision_at_k",
    "build_report",
    "cohen_kappa",
    "cross_tab",
    "kendall_tau_b",
    "map_at_k",
    "rank_correlations",
    "rbo_at_k",
    "render_report_table",
    "report_to_dict",
    "round_half_up",
    "spearman_rho",
]
