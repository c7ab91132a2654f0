"""Ranked-list similarity (RBO) and precision metrics over top-k results."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence


def rbo_at_k(
    list_a: Sequence[str],
    list_b: Sequence[str],
    p: float = 0.9,
    k: int = 10,
) -> float:
    """Rank-biased overlap truncated and renormalized at depth k.

    sum_{d=1..k} p^(d-1) * |A_d intersect B_d| / d, scaled by
    (1 - p) / (1 - p^k) so two identical depth-k lists score exactly 1.0.
    Empty input scores 0.0 by convention.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"persistence p must be in (0, 1), got {p}")
    if k < 1:
        raise ValueError(f"depth k must be >= 1, got {k}")
    if len(set(list_a)) != len(list_a) or len(set(list_b)) != len(list_b):
        raise ValueError("ranked lists must be duplicate-free")
    if not list_a or not list_b:
        return 0.0

    seen_a: set[str] = set()
    seen_b: set[str] = set()
    overlap = 0
    weighted = 0.0
    for d in range(1, k + 1):
        if d <= len(list_a):
            x = list_a[d - 1]
            if x in seen_b:
                overlap += 1
            seen_a.add(x)
        if d <= len(list_b):
            y = list_b[d - 1]
            if y in seen_a:
                overlap += 1
            seen_b.add(y)
        weighted += p ** (d - 1) * overlap / d
    return weighted * (1.0 - p) / (1.0 - p**k)


def average_precision_at_k(labels_in_rank_order: Sequence[int], k: int = 10) -> float:
    """AP over the top-k labels of one ranked list.

    Sum of precision@r at each relevant rank r, divided by the number of
    relevant results within the top k. Zero relevant results gives 0.0.
    """
    top = list(labels_in_rank_order[:k])
    relevant = sum(1 for v in top if v == 1)
    if relevant == 0:
        return 0.0
    hits = 0
    precision_sum = 0.0
    for i, label in enumerate(top):
        if label == 1:
            hits += 1
            precision_sum += hits / (i + 1)
    return precision_sum / relevant


@dataclass(frozen=True)
class MapResult:
    value: float
    query_count: int
    zero_relevant_queries: int


def map_at_k(
    ranked_lists: Mapping[str, Sequence[str]],
    relevance: Mapping[tuple[str, str], int],
    k: int = 10,
) -> MapResult:
    """Mean average precision over per-query ranked entity lists.

    ``relevance`` maps (query_id, entity_id) to a binary label; entities
    without a label count as not relevant. Queries with no relevant result
    in their top k contribute 0 and are tallied separately.
    """
    if not ranked_lists:
        return MapResult(value=0.0, query_count=0, zero_relevant_queries=0)
    total = 0.0
    zero_relevant = 0
    for query_id in sorted(ranked_lists):
        labels = [
            relevance.get((query_id, entity_id), 0)
            for entity_id in ranked_lists[query_id]
        ]
        ap = average_precision_at_k(labels, k)
        if sum(labels[:k]) == 0:
            zero_relevant += 1
        total += ap
    return MapResult(
        value=total / len(ranked_lists),
        query_count=len(ranked_lists),
        zero_relevant_queries=zero_relevant,
    )
