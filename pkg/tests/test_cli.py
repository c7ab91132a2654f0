import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from searchbench.cli import main
from searchbench.retrieval.types import RetrieverConfig, retriever_fingerprint
from searchbench.service.workspace import Workspace

from .conftest import FIXTURE_REPOS, QUERIES, build_workspace


@pytest.fixture
def runner():
    return CliRunner()


def write_config(tmp_path, app_config) -> Path:
    payload = {
        "data_dir": str(app_config.data_dir),
        "queries_file": str(app_config.queries_file),
        "repos": [
            {
                "name": r.name,
                "root_path": str(r.root_path),
                "language": r.language,
                "extensions": list(r.extensions),
            }
            for r in app_config.repos
        ],
        "retrievers": [
            {"name": r.name, "kind": r.kind, "model_id": r.model_id,
             "k1": r.k1, "b": r.b, "cutoff": r.cutoff}
            for r in app_config.retrievers
        ],
        "judges": [],
    }
    path = tmp_path / "searchbench.json"
    path.write_text(json.dumps(payload, indent=2), encoding="utf-8")
    return path


def seed_snapshot_via_workspace(app_config, query=QUERIES[0]):
    from searchbench.annotations.store import QueryRecord, query_identity

    workspace = Workspace(app_config.data_dir)
    retriever = app_config.retrievers[0]
    results = workspace.search("pyfix", retriever, query)
    fingerprint = retriever_fingerprint(retriever)
    query_id = query_identity("pyfix", fingerprint, query)
    workspace.store.snapshot_results(
        QueryRecord(query_id=query_id, text=query, repo="pyfix",
                    retriever=fingerprint),
        results,
    )
    return workspace, query_id, results


class TestIngestCli:
    def test_ingest_writes_corpus_and_stats(self, runner, tmp_path):
        out = tmp_path / "corpus.jsonl"
        result = runner.invoke(
            main,
            ["ingest", "--repo", str(FIXTURE_REPOS / "go_fixture"),
             "--language", "go", "--out", str(out), "--name", "gofix"],
        )
        assert result.exit_code == 0, result.output
        assert "ingested 7 functions" in result.output
        assert "% Docs Absent" in result.output
        assert len(out.read_text().splitlines()) == 7

    def test_ingest_missing_repo_fails(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["ingest", "--repo", str(tmp_path / "nope"), "--language", "go",
             "--out", str(tmp_path / "c.jsonl")],
        )
        assert result.exit_code != 0

    def test_ingest_custom_extensions(self, runner, tmp_path):
        out = tmp_path / "corpus.jsonl"
        result = runner.invoke(
            main,
            ["ingest", "--repo", str(FIXTURE_REPOS / "c_fixture"),
             "--language", "c", "--out", str(out), "--extensions", ".c"],
        )
        assert result.exit_code == 0
        # ringbuf.h excluded -> 5 functions instead of 6
        assert "ingested 5 functions" in result.output


class TestStatsCli:
    def test_stats_table(self, runner, tmp_path):
        out = tmp_path / "corpus.jsonl"
        runner.invoke(
            main,
            ["ingest", "--repo", str(FIXTURE_REPOS / "java_fixture"),
             "--language", "java", "--out", str(out)],
        )
        result = runner.invoke(main, ["stats", "--corpus", str(out)])
        assert result.exit_code == 0
        assert "# Functions" in result.output
        assert "8" in result.output


class TestIndexCli:
    def test_index_build_then_noop(self, runner, tmp_path):
        config = build_workspace(tmp_path)
        config_path = write_config(tmp_path, config)
        # force a rebuild of a fresh retriever directory state: second call no-op
        first = runner.invoke(
            main,
            ["index", "--config", str(config_path), "--repo", "pyfix",
             "--retriever", "bm25"],
        )
        assert first.exit_code == 0, first.output
        assert "up to date" in first.output  # conftest already built it
        second = runner.invoke(
            main,
            ["index", "--config", str(config_path), "--repo", "pyfix",
             "--retriever", "bm25", "--force"],
        )
        assert second.exit_code == 0
        assert "index built" in second.output

    def test_index_rebuild_after_corpus_change(self, runner, tmp_path):
        config = build_workspace(tmp_path)
        config_path = write_config(tmp_path, config)
        workspace = Workspace(config.data_dir)
        corpus = workspace.corpus_path("pyfix")
        corpus.write_text(
            corpus.read_text() + "\n", encoding="utf-8"
        )  # digest changes
        result = runner.invoke(
            main,
            ["index", "--config", str(config_path), "--repo", "pyfix",
             "--retriever", "bm25"],
        )
        assert result.exit_code == 0
        assert "index built" in result.output

    def test_unknown_retriever(self, runner, tmp_path):
        config = build_workspace(tmp_path)
        config_path = write_config(tmp_path, config)
        result = runner.invoke(
            main,
            ["index", "--config", str(config_path), "--repo", "pyfix",
             "--retriever", "zap"],
        )
        assert result.exit_code == 1
        assert "error:" in result.output


class TestMetricsCli:
    def test_metrics_without_labels_errors(self, runner, tmp_path):
        config = build_workspace(tmp_path)
        config_path = write_config(tmp_path, config)
        result = runner.invoke(
            main,
            ["metrics", "--config", str(config_path), "--repo", "pyfix",
             "--retriever", "bm25", "--judge", "nobody"],
        )
        assert result.exit_code == 1
        assert "no annotations" in result.output

    def test_metrics_end_to_end(self, runner, tmp_path):
        config = build_workspace(tmp_path)
        config_path = write_config(tmp_path, config)
        workspace, query_id, results = seed_snapshot_via_workspace(config)
        for result in results:
            workspace.store.record_label(
                "alice", query_id, result.entity_id, result.rank % 2
            )
            workspace.store.record_label(
                "judge-m", query_id, result.entity_id, 1, source="llm"
            )
        workspace.close()
        out = tmp_path / "report.json"
        cli_result = runner.invoke(
            main,
            ["metrics", "--config", str(config_path), "--repo", "pyfix",
             "--retriever", "bm25", "--judge", "judge-m", "--out", str(out)],
        )
        assert cli_result.exit_code == 0, cli_result.output
        payload = json.loads(out.read_text())
        assert payload["source_a"] == "alice"
        assert payload["cross_tab"]["total"] == len(results)


class TestJudgeCli:
    def test_judge_with_mock_transcript(self, runner, tmp_path):
        config = build_workspace(tmp_path)
        config_path = write_config(tmp_path, config)
        workspace, query_id, results = seed_snapshot_via_workspace(config)
        workspace.close()
        # Transcript keyed by substring match against the prompt; use the
        # query text which appears in every prompt -> single catch-all entry.
        transcript_path = tmp_path / "transcript.jsonl"
        transcript_path.write_text(
            json.dumps({"custom_id": QUERIES[0], "response": '{"relevance": 2}'})
            + "\n"
        )
        cli_result = runner.invoke(
            main,
            ["judge", "--config", str(config_path), "--repo", "pyfix",
             "--retriever", "bm25", "--model", "mock-m",
             "--mock", str(transcript_path)],
        )
        assert cli_result.exit_code == 0, cli_result.output
        assert f"judged={len(results)}" in cli_result.output

    def test_judge_batch_writes_requests(self, runner, tmp_path):
        config = build_workspace(tmp_path)
        config_path = write_config(tmp_path, config)
        workspace, _, results = seed_snapshot_via_workspace(config)
        workspace.close()
        cli_result = runner.invoke(
            main,
            ["judge", "--config", str(config_path), "--repo", "pyfix",
             "--retriever", "bm25", "--model", "batch-m", "--batch"],
        )
        assert cli_result.exit_code == 0, cli_result.output
        requests_file = Path(config.data_dir) / "batch" / "pyfix-bm25-batch-m.jsonl"
        lines = requests_file.read_text().splitlines()
        assert len(lines) == len(results)
        first = json.loads(lines[0])
        assert set(first) == {"custom_id", "prompt"}


class TestTranspileCli:
    def test_transpile_outputs(self, runner, tmp_path):
        dataset = tmp_path / "qa.jsonl"
        records = [
            {"id": 1, "query": "add", "code": "def f(a, b):\n    return a + b\n",
             "label": 1},
            {"id": 2, "query": "comp", "code": "def f(xs):\n    return [x for x in xs]\n",
             "label": 0},
        ]
        dataset.write_text("\n".join(json.dumps(r) for r in records) + "\n")
        out_dir = tmp_path / "out"
        result = runner.invoke(
            main, ["transpile", "--in", str(dataset), "--out", str(out_dir)]
        )
        assert result.exit_code == 0, result.output
        assert "transpiled 1/2 (50.00%)" in result.output
        assert (out_dir / "transpiled.jsonl").exists()
        assert (out_dir / "failures.jsonl").exists()
        stats = json.loads((out_dir / "stats.json").read_text())
        assert stats["transpiled"] == 1
        assert stats["node_kinds"]["ListComp"]["count"] == 1

    def test_transpile_default_type(self, runner, tmp_path):
        dataset = tmp_path / "qa.jsonl"
        dataset.write_text(
            json.dumps({"id": 1, "query": "q",
                        "code": "def f(a):\n    return a\n", "label": 1}) + "\n"
        )
        out_dir = tmp_path / "out"
        result = runner.invoke(
            main,
            ["transpile", "--in", str(dataset), "--out", str(out_dir),
             "--default-type", "long"],
        )
        assert result.exit_code == 0
        record = json.loads((out_dir / "transpiled.jsonl").read_text())
        assert record["c_code"].startswith("long f(long a)")


class TestBootstrapCli:
    def test_bootstrap_with_mock(self, runner, tmp_path):
        dataset = tmp_path / "qa.jsonl"
        records = [
            {"id": "1", "query": "alpha add", "code": "def f(a, b):\n    return a + b\n", "label": 1},
            {"id": "2", "query": "beta negate", "code": "def f(x):\n    return -x\n", "label": 0},
        ]
        dataset.write_text("\n".join(json.dumps(r) for r in records) + "\n")
        transcript = tmp_path / "mock.jsonl"
        transcript.write_text(
            json.dumps({"custom_id": "1", "response": '{"relevance": 3}'}) + "\n"
            + json.dumps({"custom_id": "2", "response": '{"relevance": 0}'}) + "\n"
        )
        run_dir = tmp_path / "run"
        result = runner.invoke(
            main,
            ["bootstrap", "--in", str(dataset), "--model", "mock-m",
             "--mock", str(transcript), "--out", str(run_dir)],
        )
        assert result.exit_code == 0, result.output
        assert "agreement=100.0" in result.output
        payload = json.loads((run_dir / "crosstab.json").read_text())
        assert payload["cross_tab"]["total"] == 2


class TestMergeExportCli:
    def test_export_then_merge_round_trip(self, runner, tmp_path):
        config = build_workspace(tmp_path)
        config_path = write_config(tmp_path, config)
        workspace, query_id, results = seed_snapshot_via_workspace(config)
        workspace.store.record_label("alice", query_id, results[0].entity_id, 1)
        workspace.close()
        out = tmp_path / "alice.jsonl"
        export = runner.invoke(
            main,
            ["export-annotations", "--config", str(config_path),
             "--annotator", "alice", "--out", str(out)],
        )
        assert export.exit_code == 0, export.output
        merge = runner.invoke(
            main,
            ["merge-annotations", "--config", str(config_path), "--in", str(out)],
        )
        assert merge.exit_code == 0
        assert "merged 0 new label records" in merge.output

    def test_export_unknown_annotator_fails(self, runner, tmp_path):
        config = build_workspace(tmp_path)
        config_path = write_config(tmp_path, config)
        result = runner.invoke(
            main,
            ["export-annotations", "--config", str(config_path),
             "--annotator", "ghost", "--out", str(tmp_path / "x.jsonl")],
        )
        assert result.exit_code == 1
