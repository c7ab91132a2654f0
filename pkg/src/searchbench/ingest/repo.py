"""Repository specification, deterministic file walking, and full ingestion."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from searchbench.ingest.entities import CodeEntity, make_entity
from searchbench.ingest.extractors import ExtractionError, extract_functions

log = logging.getLogger(__name__)

DEFAULT_EXTENSIONS: dict[str, tuple[str, ...]] = {
    "c": (".c", ".h"),
    "javascript": (".js",),
    "python": (".py",),
    "go": (".go",),
    "java": (".java",),
}
LANGUAGES = tuple(sorted(DEFAULT_EXTENSIONS))

_VCS_DIRS = {".git", ".hg", ".svn"}


@dataclass(frozen=True)
class RepoSpec:
    name: str
    root_path: Path
    language: str
    extensions: tuple[str, ...]
    commit: str = ""

    def __post_init__(self) -> None:
        if self.language not in DEFAULT_EXTENSIONS:
            raise ValueError(
                f"unknown language {self.language!r}; expected one of {LANGUAGES}"
            )
        if not self.extensions:
            raise ValueError("extensions must be non-empty")
        for ext in self.extensions:
            if not ext.startswith("."):
                raise ValueError(f"extension {ext!r} must begin with '.'")


def read_commit(root: Path) -> str:
    """10-character revision prefix from VCS metadata, empty when absent."""
    head = root / ".git" / "HEAD"
    try:
        content = head.read_text().strip()
    except OSError:
        return ""
    if content.startswith("ref:"):
        ref = content.split(None, 1)[1]
        ref_file = root / ".git" / ref
        try:
            content = ref_file.read_text().strip()
        except OSError:
            packed = root / ".git" / "packed-refs"
            try:
                for line in packed.read_text().splitlines():
                    if line.endswith(ref):
                        content = line.split()[0]
                        break
                else:
                    return ""
            except OSError:
                return ""
    return content[:10]


def make_repo_spec(
    name: str,
    root_path: Path | str,
    language: str,
    extensions: Sequence[str] | None = None,
) -> RepoSpec:
    root = Path(root_path)
    if not root.is_dir():
        raise FileNotFoundError(f"repository root does not exist: {root}")
    exts = tuple(extensions) if extensions else DEFAULT_EXTENSIONS[language]
    return RepoSpec(
        name=name,
        root_path=root,
        language=language,
        extensions=exts,
        commit=read_commit(root),
    )


def walk_repo(spec: RepoSpec, ignore: Sequence[str] = ()) -> list[str]:
    """Relative paths of matching files, lexicographic, VCS metadata skipped."""
    if not spec.root_path.is_dir():
        raise FileNotFoundError(f"repository root does not exist: {spec.root_path}")
    skip_dirs = _VCS_DIRS | set(ignore)
    matches: list[str] = []
    stack = [spec.root_path]
    while stack:
        directory = stack.pop()
        for child in directory.iterdir():
            if child.is_dir():
                if child.name not in skip_dirs:
                    stack.append(child)
            elif child.is_file():
                if any(child.name.endswith(ext) for ext in spec.extensions):
                    matches.append(child.relative_to(spec.root_path).as_posix())
    return sorted(matches)


@dataclass
class IngestResult:
    entities: list[CodeEntity]
    warnings: list[str] = field(default_factory=list)
    file_count: int = 0


def ingest_repo(spec: RepoSpec, ignore: Sequence[str] = ()) -> IngestResult:
    """Extract every function under the repo root.

    Unreadable or unparsable files are recorded as warnings and skipped;
    ingestion continues. Entities come back sorted by (rel_path, start_line)
    so repeated runs over the same tree serialize identically.
    """
    result = IngestResult(entities=[])
    for rel_path in walk_repo(spec, ignore=ignore):
        result.file_count += 1
        full_path = spec.root_path / rel_path
        try:
            source = full_path.read_text(encoding="utf-8", errors="replace")
        except OSError as exc:
            result.warnings.append(f"{rel_path}: unreadable ({exc})")
            continue
        try:
            functions = extract_functions(source, spec.language)
        except ExtractionError as exc:
            result.warnings.append(f"{rel_path}: {exc}")
            continue
        for fn in functions:
            result.entities.append(
                make_entity(
                    repo=spec.name,
                    rel_path=rel_path,
                    function_name=fn.function_name,
                    code=fn.code,
                    docstring=fn.docstring,
                    start_line=fn.start_line,
                    end_line=fn.end_line,
                )
            )
    for warning in result.warnings:
        log.warning("ingest %s: %s", spec.name, warning)
    result.entities.sort(key=lambda e: (e.rel_path, e.start_line, e.entity_id))
    return result
