"""HTTP JSON API exposing search, annotation, judging, and metrics.

Every UI capability goes through these endpoints; the browser client keeps
no authoritative state. Result payloads embed the full code text so a
listing renders without follow-up fetches.
"""

from __future__ import annotations

from typing import Callable

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from searchbench.annotations.store import (
    ConflictError,
    QueryRecord,
    ReferentialError,
    query_identity,
)
from searchbench.judging.client import JudgeClient, JudgeError
from searchbench.judging.prompts import JudgeConfig
from searchbench.judging.runner import judge_snapshots
from searchbench.metrics.report import build_report, report_to_dict
from searchbench.retrieval.embeddings import EmbeddingClient, EmbeddingError
from searchbench.retrieval.types import retriever_fingerprint
from searchbench.service.config import AppConfig
from searchbench.service.workspace import IndexMissingError, Workspace


class SearchRequest(BaseModel):
    query: str
    repo: str
    retriever: str


class AnnotationRequest(BaseModel):
    query_id: str
    entity_id: str
    label: int
    annotator_id: str


class JudgeRunRequest(BaseModel):
    repo: str
    retriever: str
    model: str


def create_app(
    config: AppConfig,
    *,
    judge_provider: Callable[[str], str] | None = None,
    embed_client: EmbeddingClient | None = None,
) -> FastAPI:
    """Build the API app.

    `judge_provider` and `embed_client` are injection points for tests and
    offline runs; by default both come from environment configuration.
    """
    app = FastAPI(title="searchbench", version="0.1.0")
    # Localhost research tool: the browser UI may load from another origin
    # (file:// or a static dev server), so CORS stays permissive.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    workspace = Workspace(config.data_dir)
    app.state.workspace = workspace

    @app.exception_handler(RequestValidationError)
    async def malformed_request(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    def _retriever(name: str):
        retriever = config.retriever(name)
        if retriever is None:
            raise HTTPException(
                status_code=400, detail=f"unknown retriever {name!r}"
            )
        return retriever

    def _repo(name: str):
        repo = config.repo(name)
        if repo is None:
            raise HTTPException(status_code=400, detail=f"unknown repo {name!r}")
        return repo

    @app.get("/repos")
    def list_repos():
        return {
            "repos": [
                {
                    "name": r.name,
                    "language": r.language,
                    "extensions": list(r.extensions),
                    "commit": r.commit,
                }
                for r in config.repos
            ]
        }

    @app.get("/retrievers")
    def list_retrievers():
        return {
            "retrievers": [
                {
                    "name": r.name,
                    "kind": r.kind,
                    "model_id": r.model_id,
                    "k1": r.k1,
                    "b": r.b,
                    "cutoff": r.cutoff,
                }
                for r in config.retrievers
            ]
        }

    @app.get("/queries")
    def list_queries():
        if config.queries_file is None:
            return {"queries": []}
        # Served verbatim so every annotator pastes byte-identical strings.
        lines = config.queries_file.read_text(encoding="utf-8").split("\n")
        return {"queries": [line for line in lines if line.strip()]}

    @app.post("/search")
    def search(request: SearchRequest):
        repo = _repo(request.repo)
        retriever = _retriever(request.retriever)
        try:
            results = workspace.search(
                repo.name, retriever, request.query, embed_client=embed_client
            )
        except IndexMissingError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except FileNotFoundError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except EmbeddingError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        fingerprint = retriever_fingerprint(retriever)
        query_id = query_identity(repo.name, fingerprint, request.query)
        record = QueryRecord(
            query_id=query_id,
            text=request.query,
            repo=repo.name,
            retriever=fingerprint,
        )
        try:
            workspace.store.snapshot_results(record, results)
        except ConflictError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        entities = workspace.entities_by_id(repo.name)
        payload = []
        for result in results:
            entity = entities.get(result.entity_id)
            payload.append(
                {
                    "entity_id": result.entity_id,
                    "rank": result.rank,
                    "score": result.score,
                    "rel_path": entity.rel_path if entity else "",
                    "function_name": entity.function_name if entity else "",
                    "code": entity.code if entity else "",
                    "docstring": entity.docstring if entity else "",
                }
            )
        return {"query_id": query_id, "results": payload}

    @app.post("/annotations")
    def post_annotation(request: AnnotationRequest):
        if request.label not in (0, 1):
            raise HTTPException(status_code=400, detail="label must be 0 or 1")
        try:
            stored = workspace.store.record_label(
                annotator_id=request.annotator_id,
                query_id=request.query_id,
                entity_id=request.entity_id,
                label=request.label,
                source="human",
            )
        except ReferentialError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return {
            "annotator_id": stored.annotator_id,
            "query_id": stored.query_id,
            "entity_id": stored.entity_id,
            "label": stored.label,
            "timestamp_ms": stored.timestamp_ms,
            "source": stored.source,
        }

    @app.get("/annotations")
    def get_annotations(query_id: str, annotator_id: str | None = None):
        annotators = (
            [annotator_id]
            if annotator_id
            else [a for a, _ in workspace.store.annotators()]
        )
        labels = []
        for annotator in annotators:
            for record in workspace.store.effective_labels(
                annotator, query_id
            ).values():
                labels.append(
                    {
                        "annotator_id": record.annotator_id,
                        "query_id": record.query_id,
                        "entity_id": record.entity_id,
                        "label": record.label,
                        "timestamp_ms": record.timestamp_ms,
                        "source": record.source,
                    }
                )
        labels.sort(key=lambda r: (r["annotator_id"], r["entity_id"]))
        return {"query_id": query_id, "labels": labels}

    @app.post("/judge/run")
    def judge_run(request: JudgeRunRequest):
        repo = _repo(request.repo)
        retriever = _retriever(request.retriever)
        judge_config = config.judge(request.model) or JudgeConfig(
            model_id=request.model
        )
        provider = judge_provider
        if provider is None:
            try:
                client = JudgeClient.from_env(model_id=request.model)
            except JudgeError as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            provider = client.complete
        report = judge_snapshots(
            workspace.store,
            workspace.entities_by_id(repo.name),
            judge_config,
            repo=repo.name,
            retriever_fp=retriever_fingerprint(retriever),
            provider=provider,
        )
        return {
            "judged": report.judged,
            "skipped_existing": report.skipped_existing,
            "errors": report.error_count,
            "truncated_passages": report.truncated_passages,
        }

    @app.get("/metrics")
    def metrics(
        repo: str, retriever: str, judge: str, annotator: str | None = None
    ):
        repo_spec = _repo(repo)
        retriever_cfg = _retriever(retriever)
        fingerprint = retriever_fingerprint(retriever_cfg)
        store = workspace.store
        queries = store.queries_for(repo_spec.name, fingerprint)
        if not queries:
            raise HTTPException(
                status_code=409,
                detail=f"no snapshots for repo={repo!r} retriever={retriever!r}",
            )
        humans = [a for a, source in store.annotators() if source == "human"]
        if annotator is None:
            if len(humans) != 1:
                raise HTTPException(
                    status_code=400,
                    detail=f"pass annotator=; human annotators present: {humans}",
                )
            annotator = humans[0]
        snapshots = {
            q.query_id: [r.entity_id for r in store.snapshot(q.query_id)]
            for q in queries
        }
        labels_a = {
            key: record.label
            for key, record in store.effective_labels(annotator).items()
        }
        labels_b = {
            key: record.label
            for key, record in store.effective_labels(judge).items()
        }
        if not labels_a or not labels_b:
            raise HTTPException(
                status_code=409,
                detail="no annotations for the requested sources",
            )
        report = build_report(
            snapshots,
            labels_a,
            labels_b,
            repo=repo_spec.name,
            retriever=retriever_cfg.name,
            source_a=annotator,
            source_b=judge,
        )
        return report_to_dict(report)

    return app
