from collections import defaultdict
from pathlib import Path

import pytest

from searchbench.ingest import ingest_repo, make_repo_spec, write_corpus
from searchbench.retrieval.types import RetrieverConfig
from searchbench.service.config import AppConfig
from searchbench.service.workspace import Workspace

FIXTURE_REPOS = Path(__file__).parent / "fixtures" / "repos"

# -- acceptance criterion reporting -----------------------------------------

_acceptance_outcomes: dict[tuple[int, str], list[bool]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "acceptance(num, name): marks a test as part of an acceptance criterion",
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    marker = item.get_closest_marker("acceptance")
    if marker:
        key = (marker.kwargs["num"], marker.kwargs["name"])
        _acceptance_outcomes[key].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_outcomes:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for (num, name), outcomes in sorted(_acceptance_outcomes.items()):
        status = "PASS" if all(outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {num:>2} {name}: {status}")

QUERIES = [
    "how do I push a value onto a stack?",
    "create a queue from a list of items",
    "search a binary tree for a value",
]


def build_workspace(tmp_path: Path, repo="pyfix", language="python") -> AppConfig:
    """Ingest the python fixture repo, build its BM25 index, write queries."""
    data_dir = tmp_path / "data"
    spec = make_repo_spec(repo, FIXTURE_REPOS / "py_fixture", language)
    workspace = Workspace(data_dir)
    result = ingest_repo(spec)
    write_corpus(result.entities, workspace.corpus_path(repo))
    retriever = RetrieverConfig(name="bm25", kind="sparse_bm25")
    workspace.build_index(repo, retriever)
    queries_file = tmp_path / "queries.txt"
    queries_file.write_text("\n".join(QUERIES) + "\n", encoding="utf-8")
    return AppConfig(
        data_dir=data_dir,
        repos=[spec],
        retrievers=[retriever],
        judges=[],
        queries_file=queries_file,
    )


@pytest.fixture
def app_config(tmp_path) -> AppConfig:
    return build_workspace(tmp_path)
