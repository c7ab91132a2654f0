"""Command-line interface: one subcommand per workflow stage."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from searchbench.annotations.store import ConflictError
from searchbench.bootstrap import run_bootstrap
from searchbench.ingest.entities import compute_stats, read_corpus, render_stats, write_corpus
from searchbench.ingest.repo import LANGUAGES, ingest_repo, make_repo_spec
from searchbench.judging.batch import read_batch_responses
from searchbench.judging.client import JudgeClient
from searchbench.judging.prompts import JudgeConfig
from searchbench.judging.runner import judge_snapshots, judge_snapshots_batch
from searchbench.metrics.report import (
    build_report,
    render_crosstab_table,
    render_report_table,
    report_to_dict,
)
from searchbench.retrieval.types import retriever_fingerprint
from searchbench.service.config import load_config
from searchbench.service.workspace import Workspace
from searchbench.transpile.dataset import (
    read_qa_records,
    render_category_table,
    render_node_kind_table,
    transpile_dataset,
    write_dataset_outputs,
)
from searchbench.transpile.emit import TypeMapping


def _fail(message: str) -> None:
    """One-line machine-parseable error, nonzero exit."""
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _load_config_or_fail(config_path: str):
    try:
        return load_config(config_path)
    except (OSError, ValueError, KeyError) as exc:
        _fail(f"config: {exc}")


@click.group()
def main() -> None:
    """Code search relevance workbench."""


@main.command()
@click.option("--repo", "repo_path", required=True, type=click.Path(exists=True))
@click.option("--language", required=True, type=click.Choice(LANGUAGES))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--extensions", default="", help="Comma-separated, e.g. .go,.c")
@click.option("--name", default="", help="Repo name (defaults to directory name)")
@click.option("--ignore", multiple=True, help="Directory names to skip")
def ingest(repo_path, language, out_path, extensions, name, ignore):
    """Walk a repository and write a function-level corpus file."""
    exts = [e.strip() for e in extensions.split(",") if e.strip()] or None
    repo_name = name or Path(repo_path).resolve().name
    try:
        spec = make_repo_spec(repo_name, repo_path, language, exts)
        result = ingest_repo(spec, ignore=ignore)
    except (FileNotFoundError, ValueError) as exc:
        _fail(str(exc))
    count = write_corpus(result.entities, out_path)
    for warning in result.warnings:
        click.echo(f"warning: {warning}", err=True)
    click.echo(
        f"ingested {count} functions from {result.file_count} files "
        f"(repo={repo_name}, commit={spec.commit or 'n/a'})"
    )
    click.echo(render_stats(compute_stats(result.entities)), nl=False)


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
def stats(corpus_path):
    """Corpus summary statistics."""
    try:
        entities = read_corpus(corpus_path)
    except (ValueError, json.JSONDecodeError) as exc:
        _fail(f"corpus: {exc}")
    click.echo(render_stats(compute_stats(entities)), nl=False)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--repo", required=True)
@click.option("--retriever", required=True)
@click.option("--force", is_flag=True, help="Rebuild even when up to date")
def index(config_path, repo, retriever, force):
    """Build (or refresh) one index for a configured repo and retriever."""
    config = _load_config_or_fail(config_path)
    retriever_cfg = config.retriever(retriever)
    if retriever_cfg is None:
        _fail(f"unknown retriever {retriever!r}")
    if config.repo(repo) is None:
        _fail(f"unknown repo {repo!r}")
    workspace = Workspace(config.data_dir)
    corpus_file = workspace.corpus_path(repo)
    if not corpus_file.is_file():
        repo_spec = config.repo(repo)
        result = ingest_repo(repo_spec)
        write_corpus(result.entities, corpus_file)
        click.echo(f"ingested {len(result.entities)} functions -> {corpus_file}")
    try:
        built = workspace.build_index(repo, retriever_cfg, force=force)
    except Exception as exc:
        _fail(str(exc))
    click.echo("index built" if built else "index up to date (no-op)")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--host", default=None)
@click.option("--port", default=None, type=int)
def serve(config_path, host, port):
    """Run the local HTTP API."""
    import uvicorn

    from searchbench.service.app import create_app

    config = _load_config_or_fail(config_path)
    app = create_app(config)
    default_host, _, default_port = config.listen_addr.partition(":")
    uvicorn.run(
        app,
        host=host or default_host or "localhost",
        port=port or int(default_port or 8080),
    )


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--repo", required=True)
@click.option("--retriever", required=True)
@click.option("--model", required=True)
@click.option("--batch", is_flag=True, help="Write a batch request file instead")
@click.option("--responses", "responses_path", type=click.Path(exists=True),
              help="Batch response file to ingest")
@click.option("--mock", "mock_path", type=click.Path(exists=True),
              help="Transcript JSONL; a record answers prompts containing "
                   "its custom_id string (e.g. the query text)")
def judge(config_path, repo, retriever, model, batch, responses_path, mock_path):
    """Generate model relevance labels for snapshotted search results."""
    config = _load_config_or_fail(config_path)
    retriever_cfg = config.retriever(retriever)
    if retriever_cfg is None:
        _fail(f"unknown retriever {retriever!r}")
    if config.repo(repo) is None:
        _fail(f"unknown repo {repo!r}")
    judge_config = config.judge(model) or JudgeConfig(model_id=model)
    workspace = Workspace(config.data_dir)
    fingerprint = retriever_fingerprint(retriever_cfg)
    try:
        entities = workspace.entities_by_id(repo)
    except FileNotFoundError as exc:
        _fail(str(exc))
    if batch:
        responses = None
        if responses_path:
            responses = read_batch_responses(responses_path)
        requests_path = (
            Path(config.data_dir) / "batch" / f"{repo}-{retriever}-{model}.jsonl"
        )
        report, batch_report = judge_snapshots_batch(
            workspace.store,
            entities,
            judge_config,
            repo=repo,
            retriever_fp=fingerprint,
            responses=responses,
            requests_path=requests_path,
        )
        click.echo(f"batch requests: {requests_path}")
        if batch_report is not None:
            click.echo(
                f"judged={report.judged} errors={report.error_count} "
                f"pending={len(batch_report.pending)} "
                f"skipped={report.skipped_existing}"
            )
        return
    if mock_path:
        transcript = read_batch_responses(mock_path)

        def provider(prompt: str) -> str:
            for custom_id, response in transcript.items():
                if custom_id in prompt:
                    return response
            raise ValueError("mock transcript has no entry matching prompt")

    else:
        try:
            client = JudgeClient.from_env(model_id=model)
        except Exception as exc:
            _fail(str(exc))
        provider = client.complete
    report = judge_snapshots(
        workspace.store,
        entities,
        judge_config,
        repo=repo,
        retriever_fp=fingerprint,
        provider=provider,
    )
    click.echo(
        f"judged={report.judged} errors={report.error_count} "
        f"skipped={report.skipped_existing}"
    )


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--repo", required=True)
@click.option("--retriever", required=True)
@click.option("--judge", "judge_model", required=True)
@click.option("--annotator", default=None, help="Human side (default: sole human)")
@click.option("--out", "out_path", default=None, type=click.Path())
def metrics(config_path, repo, retriever, judge_model, annotator, out_path):
    """Agreement metrics between a human annotator and a judge model."""
    config = _load_config_or_fail(config_path)
    retriever_cfg = config.retriever(retriever)
    if retriever_cfg is None:
        _fail(f"unknown retriever {retriever!r}")
    workspace = Workspace(config.data_dir)
    store = workspace.store
    fingerprint = retriever_fingerprint(retriever_cfg)
    queries = store.queries_for(repo, fingerprint)
    if not queries:
        _fail("no annotations: no snapshots stored for this repo/retriever")
    if annotator is None:
        humans = [a for a, source in store.annotators() if source == "human"]
        if len(humans) != 1:
            _fail(f"pass --annotator; human annotators present: {humans}")
        annotator = humans[0]
    snapshots = {
        q.query_id: [r.entity_id for r in store.snapshot(q.query_id)]
        for q in queries
    }
    labels_a = {k: r.label for k, r in store.effective_labels(annotator).items()}
    labels_b = {k: r.label for k, r in store.effective_labels(judge_model).items()}
    if not labels_a:
        _fail(f"no annotations from {annotator!r}")
    if not labels_b:
        _fail(f"no annotations from {judge_model!r}")
    report = build_report(
        snapshots,
        labels_a,
        labels_b,
        repo=repo,
        retriever=retriever_cfg.name,
        source_a=annotator,
        source_b=judge_model,
    )
    click.echo(render_report_table([report]), nl=False)
    click.echo(
        render_crosstab_table(
            report.cross_tab, row_source=annotator, col_source=judge_model
        ),
        nl=False,
    )
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
            json.dump(report_to_dict(report), handle, indent=2, sort_keys=True)
            handle.write("\n")
        click.echo(f"wrote {out_path}")


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--default-type", "default_type", default=None,
              help="Concrete C type replacing the None placeholder")
def transpile(in_path, out_dir, default_type):
    """Transpile a CosQA-like JSONL dataset into C."""
    try:
        records = read_qa_records(in_path)
    except (ValueError, json.JSONDecodeError) as exc:
        _fail(f"dataset: {exc}")
    types = TypeMapping(default_type=default_type) if default_type else TypeMapping()
    result = transpile_dataset(records, types)
    write_dataset_outputs(result, out_dir)
    stats_obj = result.stats
    click.echo(
        f"transpiled {stats_obj.transpiled}/{stats_obj.total_records} "
        f"({100.0 * stats_obj.transpiled / stats_obj.total_records:.2f}%)"
        if stats_obj.total_records
        else "empty dataset"
    )
    if stats_obj.failed:
        click.echo(render_category_table(stats_obj), nl=False)
        click.echo(render_node_kind_table(stats_obj), nl=False)


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--model", required=True)
@click.option("--mock", "mock_path", type=click.Path(exists=True),
              help="Transcript JSONL {custom_id, response} keyed by record id")
@click.option("--out", "run_dir", required=True, type=click.Path())
@click.option("--default-type", "default_type", default=None)
def bootstrap(in_path, model, mock_path, run_dir, default_type):
    """Transpile a labeled dataset and judge it in the target language."""
    try:
        records = read_qa_records(in_path)
    except (ValueError, json.JSONDecodeError) as exc:
        _fail(f"dataset: {exc}")
    if mock_path:
        transcript = read_batch_responses(mock_path)
        by_query = {str(r["id"]): r["query"] for r in records}

        def provider(prompt: str) -> str:
            for record_id, query in by_query.items():
                if query and query in prompt and record_id in transcript:
                    return transcript[record_id]
            raise ValueError("mock transcript has no entry for prompt")

    else:
        try:
            client = JudgeClient.from_env(model_id=model)
        except Exception as exc:
            _fail(str(exc))
        provider = client.complete
    types = TypeMapping(default_type=default_type) if default_type else TypeMapping()
    run = run_bootstrap(
        records,
        JudgeConfig(model_id=model),
        types,
        provider=provider,
        run_dir=run_dir,
        dataset_id=Path(in_path).name,
    )
    click.echo(
        f"judged={run.judged} skipped={run.skipped} errors={run.judge_errors} "
        f"agreement={run.counts.percent_agreement}"
    )
    click.echo(f"outputs in {run_dir}/")


@main.command(name="merge-annotations")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
def merge_annotations(config_path, in_path):
    """Union another annotator's exported label log into the local store."""
    config = _load_config_or_fail(config_path)
    workspace = Workspace(config.data_dir)
    try:
        added = workspace.store.merge_annotations(in_path)
    except (ConflictError, ValueError) as exc:
        _fail(str(exc))
    click.echo(f"merged {added} new label records")


@main.command(name="export-annotations")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--annotator", required=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def export_annotations(config_path, annotator, out_path):
    """Export one annotator's full label log as JSONL."""
    config = _load_config_or_fail(config_path)
    workspace = Workspace(config.data_dir)
    count = workspace.store.export_annotations(out_path, annotator)
    if count == 0:
        _fail(f"no annotations from {annotator!r}")
    click.echo(f"exported {count} label records to {out_path}")


if __name__ == "__main__":
    main()
