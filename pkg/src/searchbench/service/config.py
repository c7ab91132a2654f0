"""Application configuration: repos, retrievers, judges, data directory."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from searchbench.ingest.repo import DEFAULT_EXTENSIONS, RepoSpec, read_commit
from searchbench.judging.prompts import JudgeConfig
from searchbench.retrieval.types import RetrieverConfig

ENV_DATA_DIR = "DATA_DIR"
DEFAULT_LISTEN = "localhost:8080"


@dataclass
class AppConfig:
    data_dir: Path
    repos: list[RepoSpec] = field(default_factory=list)
    retrievers: list[RetrieverConfig] = field(default_factory=list)
    judges: list[JudgeConfig] = field(default_factory=list)
    queries_file: Path | None = None
    listen_addr: str = DEFAULT_LISTEN

    def __post_init__(self) -> None:
        names = [r.name for r in self.retrievers]
        if len(set(names)) != len(names):
            raise ValueError(f"retriever names must be unique, got {names}")
        repo_names = [r.name for r in self.repos]
        if len(set(repo_names)) != len(repo_names):
            raise ValueError(f"repo names must be unique, got {repo_names}")

    def repo(self, name: str) -> RepoSpec | None:
        return next((r for r in self.repos if r.name == name), None)

    def retriever(self, name: str) -> RetrieverConfig | None:
        return next((r for r in self.retrievers if r.name == name), None)

    def judge(self, model_id: str) -> JudgeConfig | None:
        return next((j for j in self.judges if j.model_id == model_id), None)


def load_config(path: Path | str) -> AppConfig:
    """Parse a JSON config file, checking that referenced paths exist."""
    path = Path(path)
    with open(path, encoding="utf-8") as handle:
        raw = json.load(handle)
    base = path.parent

    def resolve(p: str) -> Path:
        candidate = Path(p)
        return candidate if candidate.is_absolute() else base / candidate

    data_dir = resolve(raw.get("data_dir", os.environ.get(ENV_DATA_DIR, "data")))
    repos = []
    for entry in raw.get("repos", []):
        root = resolve(entry["root_path"])
        if not root.is_dir():
            raise FileNotFoundError(f"repo root does not exist: {root}")
        language = entry["language"]
        extensions = tuple(
            entry.get("extensions", DEFAULT_EXTENSIONS.get(language, ()))
        )
        repos.append(
            RepoSpec(
                name=entry["name"],
                root_path=root,
                language=language,
                extensions=extensions,
                commit=entry.get("commit") or read_commit(root),
            )
        )
    retrievers = [
        RetrieverConfig(
            name=entry["name"],
            kind=entry["kind"],
            model_id=entry.get("model_id", ""),
            k1=entry.get("k1", 1.5),
            b=entry.get("b", 0.75),
            cutoff=entry.get("cutoff", 10),
        )
        for entry in raw.get("retrievers", [])
    ]
    judges = [
        JudgeConfig(
            model_id=entry["model_id"],
            provider=entry.get("provider", "openai_compat"),
            max_retries=entry.get("max_retries", 3),
            temperature=entry.get("temperature", 0.0),
            passage_char_budget=entry.get("passage_char_budget", 12_000),
        )
        for entry in raw.get("judges", [])
    ]
    queries_file = None
    if "queries_file" in raw:
        queries_file = resolve(raw["queries_file"])
        if not queries_file.is_file():
            raise FileNotFoundError(f"queries file does not exist: {queries_file}")
    return AppConfig(
        data_dir=data_dir,
        repos=repos,
        retrievers=retrievers,
        judges=judges,
        queries_file=queries_file,
        listen_addr=raw.get("listen_addr", DEFAULT_LISTEN),
    )
