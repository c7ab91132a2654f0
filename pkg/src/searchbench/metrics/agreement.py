"""Agreement statistics over paired binary relevance labels.

All functions operate on aligned label sequences: position i in both inputs
refers to the same (query, result) pair. Alignment and exclusion of pairs
missing a label on either side happens upstream (see report.build_report).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence


def round_half_up(value: float, places: int) -> float:
    """Round with ties away from zero (not banker's rounding)."""
    q = Decimal(1).scaleb(-places)
    return float(Decimal(repr(value)).quantize(q, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class CrossTab:
    """2x2 confusion matrix of paired binary labels.

    Rows are source A (0/1), columns are source B (0/1): ``n01`` counts
    pairs where A said 0 and B said 1.
    """

    n00: int
    n01: int
    n10: int
    n11: int

    @property
    def row0(self) -> int:
        return self.n00 + self.n01

    @property
    def row1(self) -> int:
        return self.n10 + self.n11

    @property
    def col0(self) -> int:
        return self.n00 + self.n10

    @property
    def col1(self) -> int:
        return self.n01 + self.n11

    @property
    def total(self) -> int:
        return self.n00 + self.n01 + self.n10 + self.n11

    @property
    def percent_agreement(self) -> float | None:
        """100 * diagonal / total, rounded half-up to 2 decimals.

        The division is exact decimal arithmetic so the rounded value never
        depends on binary float representation.
        """
        if self.total == 0:
            return None
        pct = Decimal(100 * (self.n00 + self.n11)) / Decimal(self.total)
        return float(pct.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))

    def as_dict(self) -> dict:
        return {
            "n00": self.n00,
            "n01": self.n01,
            "n10": self.n10,
            "n11": self.n11,
            "row_totals": [self.row0, self.row1],
            "col_totals": [self.col0, self.col1],
            "total": self.total,
            "percent_agreement": self.percent_agreement,
        }


def cross_tab(labels_a: Sequence[int], labels_b: Sequence[int]) -> CrossTab:
    """Tabulate aligned binary label sequences into a 2x2 cross-tab."""
    if len(labels_a) != len(labels_b):
        raise ValueError(
            f"label sequences not aligned: {len(labels_a)} vs {len(labels_b)}"
        )
    counts = Counter(zip(labels_a, labels_b))
    bad = [pair for pair in counts if pair[0] not in (0, 1) or pair[1] not in (0, 1)]
    if bad:
        raise ValueError(f"labels must be binary, got pairs {sorted(bad)}")
    return CrossTab(
        n00=counts[(0, 0)],
        n01=counts[(0, 1)],
        n10=counts[(1, 0)],
        n11=counts[(1, 1)],
    )


def cohen_kappa(tab: CrossTab) -> float | None:
    """Chance-corrected agreement (p_o - p_e) / (1 - p_e).

    Returns None (undefined, never silently 0) when expected agreement is 1,
    which happens exactly when both marginals are concentrated in one
    matching class. The p_e == 1 test is done in integer arithmetic so it is
    exact.
    """
    n = tab.total
    if n == 0:
        raise ValueError("cohen_kappa over an empty cross-tab")
    expected_num = tab.row0 * tab.col0 + tab.row1 * tab.col1
    if expected_num == n * n:
        return None
    p_o = (tab.n00 + tab.n11) / n
    p_e = expected_num / (n * n)
    return (p_o - p_e) / (1.0 - p_e)


def kendall_tau_b(a: Sequence[float], b: Sequence[float]) -> float | None:
    """Tie-corrected Kendall tau (tau-b) between aligned sequences.

    Concordant/discordant pairs are counted over distinct value combinations
    (O(V^2) in distinct pairs, exact integer counts). Returns None when
    either sequence is constant, where the tie correction zeroes the
    denominator.
    """
    n = len(a)
    if n != len(b):
        raise ValueError("sequences not aligned")
    if n < 2:
        return None
    combos = sorted(Counter(zip(a, b)).items())
    concordant = 0
    discordant = 0
    for i, ((xa, xb), ca) in enumerate(combos):
        for (ya, yb), cb in combos[i + 1 :]:
            if xa == ya or xb == yb:
                continue
            if (ya > xa) == (yb > xb):
                concordant += ca * cb
            else:
                discordant += ca * cb
    n0 = n * (n - 1) // 2
    n1 = sum(t * (t - 1) // 2 for t in Counter(a).values())
    n2 = sum(t * (t - 1) // 2 for t in Counter(b).values())
    if n0 == n1 or n0 == n2:
        return None
    return (concordant - discordant) / math.sqrt((n0 - n1) * (n0 - n2))


def _average_ranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def spearman_rho(a: Sequence[float], b: Sequence[float]) -> float | None:
    """Spearman rank correlation: Pearson correlation of average ranks.

    Returns None when either sequence is constant (zero rank variance).
    """
    n = len(a)
    if n != len(b):
        raise ValueError("sequences not aligned")
    if n < 2:
        return None
    ra = _average_ranks(a)
    rb = _average_ranks(b)
    mean_a = sum(ra) / n
    mean_b = sum(rb) / n
    cov = sum((x - mean_a) * (y - mean_b) for x, y in zip(ra, rb))
    var_a = sum((x - mean_a) ** 2 for x in ra)
    var_b = sum((y - mean_b) ** 2 for y in rb)
    if var_a == 0.0 or var_b == 0.0:
        return None
    return cov / math.sqrt(var_a * var_b)


def rank_correlations(
    a: Sequence[float], b: Sequence[float]
) -> tuple[float | None, float | None]:
    """(kendall tau-b, spearman rho) over aligned sequences."""
    return kendall_tau_b(a, b), spearman_rho(a, b)
