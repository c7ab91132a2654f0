"""Single-record transpilation: source text in, C text or categorized failure out."""

from __future__ import annotations

from dataclasses import dataclass

from searchbench.transpile.analyze import (
    CATEGORY_GENERIC,
    Failure,
    find_unsupported,
    parse_source,
)
from searchbench.transpile.emit import TypeMapping, emit_c


@dataclass(frozen=True)
class TranspileResult:
    """Exactly one of c_source / (category, detail) is populated."""

    status: str  # "ok" | "failed"
    c_source: str | None = None
    category: str | None = None
    node_kind: str | None = None
    detail: str | None = None
    line: int | None = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    @classmethod
    def success(cls, c_source: str) -> "TranspileResult":
        return cls(status="ok", c_source=c_source)

    @classmethod
    def failure(cls, fail: Failure) -> "TranspileResult":
        return cls(
            status="failed",
            category=fail.category,
            node_kind=fail.node_kind,
            detail=fail.detail,
            line=fail.line,
        )


def transpile_function(
    source: str, types: TypeMapping | None = None
) -> TranspileResult:
    """Translate one Python function into one C function, or reject it.

    Deterministic: identical source and type mapping always produce an
    identical result, including the failure classification.
    """
    tree, parse_failure = parse_source(source)
    if parse_failure is not None:
        return TranspileResult.failure(parse_failure)
    assert tree is not None
    unsupported = find_unsupported(tree)
    if unsupported is not None:
        return TranspileResult.failure(unsupported)
    try:
        return TranspileResult.success(emit_c(tree, types))
    except Exception as exc:  # emitter inconsistencies become Generic, never a crash
        return TranspileResult.failure(
            Failure(category=CATEGORY_GENERIC, detail=f"emitter failure: {exc}")
        )
