import json

import pytest
from fastapi.testclient import TestClient

from searchbench.service.app import create_app
from searchbench.service.config import AppConfig
from searchbench.service.workspace import Workspace

from .conftest import QUERIES, build_workspace


@pytest.fixture
def client(app_config):
    app = create_app(app_config, judge_provider=lambda prompt: '{"relevance": 2}')
    with TestClient(app) as test_client:
        yield test_client


def do_search(client, query=QUERIES[0]):
    response = client.post(
        "/search", json={"query": query, "repo": "pyfix", "retriever": "bm25"}
    )
    assert response.status_code == 200, response.text
    return response.json()


class TestCatalogEndpoints:
    def test_repos(self, client):
        body = client.get("/repos").json()
        assert body["repos"][0]["name"] == "pyfix"
        assert body["repos"][0]["language"] == "python"
        assert body["repos"][0]["commit"] == "0123456789"

    def test_retrievers(self, client):
        body = client.get("/retrievers").json()
        assert body["retrievers"][0]["name"] == "bm25"
        assert body["retrievers"][0]["cutoff"] == 10

    def test_queries_verbatim(self, client):
        body = client.get("/queries").json()
        assert body["queries"] == QUERIES


class TestSearch:
    def test_results_have_ranks_and_full_payload(self, client):
        body = do_search(client)
        results = body["results"]
        assert 0 < len(results) <= 10
        assert [r["rank"] for r in results] == list(range(1, len(results) + 1))
        first = results[0]
        assert first["code"] and first["rel_path"] and first["function_name"]
        assert "docstring" in first
        assert body["query_id"]

    def test_docstring_match_ranks_first(self, client):
        results = do_search(client, "insert a value keeping order")["results"]
        assert results[0]["function_name"] == "BinarySearchTree.insert"

    def test_same_query_idempotent_snapshot(self, client):
        first = do_search(client)
        second = do_search(client)
        assert first == second

    def test_unknown_repo_400(self, client):
        response = client.post(
            "/search", json={"query": "q", "repo": "nope", "retriever": "bm25"}
        )
        assert response.status_code == 400

    def test_unknown_retriever_400(self, client):
        response = client.post(
            "/search", json={"query": "q", "repo": "pyfix", "retriever": "nope"}
        )
        assert response.status_code == 400

    def test_malformed_request_400(self, client):
        response = client.post("/search", json={"query": "q"})
        assert response.status_code == 400

    def test_missing_index_409_with_instructions(self, tmp_path):
        config = build_workspace(tmp_path)
        # wipe the index directory to simulate a stale/missing build
        import shutil

        shutil.rmtree(Workspace(config.data_dir).index_dir("pyfix", "bm25"))
        app = create_app(config)
        with TestClient(app) as client:
            response = client.post(
                "/search",
                json={"query": "q stack", "repo": "pyfix", "retriever": "bm25"},
            )
        assert response.status_code == 409
        assert "searchbench index" in response.json()["detail"]


class TestAnnotations:
    def test_round_trip_latest_wins(self, client):
        body = do_search(client)
        query_id = body["query_id"]
        entity_id = body["results"][0]["entity_id"]
        for label in (0, 1):
            response = client.post(
                "/annotations",
                json={
                    "query_id": query_id,
                    "entity_id": entity_id,
                    "label": label,
                    "annotator_id": "alice",
                },
            )
            assert response.status_code == 200
        fetched = client.get("/annotations", params={"query_id": query_id}).json()
        labels = [l for l in fetched["labels"] if l["entity_id"] == entity_id]
        assert len(labels) == 1
        assert labels[0]["label"] == 1  # correction applied

    def test_unknown_pair_404(self, client):
        do_search(client)
        response = client.post(
            "/annotations",
            json={
                "query_id": "deadbeef00000000",
                "entity_id": "nope",
                "label": 1,
                "annotator_id": "alice",
            },
        )
        assert response.status_code == 404

    def test_bad_label_400(self, client):
        body = do_search(client)
        response = client.post(
            "/annotations",
            json={
                "query_id": body["query_id"],
                "entity_id": body["results"][0]["entity_id"],
                "label": 5,
                "annotator_id": "alice",
            },
        )
        assert response.status_code == 400


class TestJudgeAndMetrics:
    def test_judge_run_then_metrics(self, client):
        body = do_search(client)
        query_id = body["query_id"]
        for result in body["results"]:
            assert (
                client.post(
                    "/annotations",
                    json={
                        "query_id": query_id,
                        "entity_id": result["entity_id"],
                        "label": 1 if result["rank"] % 2 else 0,
                        "annotator_id": "alice",
                    },
                ).status_code
                == 200
            )
        run = client.post(
            "/judge/run",
            json={"repo": "pyfix", "retriever": "bm25", "model": "mock-judge"},
        )
        assert run.status_code == 200
        assert run.json()["judged"] == len(body["results"])
        assert run.json()["errors"] == 0

        metrics = client.get(
            "/metrics",
            params={"repo": "pyfix", "retriever": "bm25", "judge": "mock-judge"},
        )
        assert metrics.status_code == 200
        payload = metrics.json()
        assert payload["source_a"] == "alice"
        assert payload["source_b"] == "mock-judge"
        assert payload["cross_tab"]["total"] == len(body["results"])
        # mock judge said relevant everywhere; agreement = alice's 1-rate
        ones = sum(1 for r in body["results"] if r["rank"] % 2)
        expected_pct = round(100 * ones / len(body["results"]), 2)
        assert payload["percent_agreement"] == pytest.approx(expected_pct, abs=0.01)

    def test_metrics_without_snapshots_409(self, client):
        response = client.get(
            "/metrics",
            params={"repo": "pyfix", "retriever": "bm25", "judge": "x"},
        )
        assert response.status_code == 409

    def test_judge_rerun_skips(self, client):
        body = do_search(client)
        run1 = client.post(
            "/judge/run",
            json={"repo": "pyfix", "retriever": "bm25", "model": "mock-judge"},
        ).json()
        run2 = client.post(
            "/judge/run",
            json={"repo": "pyfix", "retriever": "bm25", "model": "mock-judge"},
        ).json()
        assert run1["judged"] == len(body["results"])
        assert run2["judged"] == 0
        assert run2["skipped_existing"] == len(body["results"])


class TestDenseRetrieverService:
    def make_dense_config(self, tmp_path):
        import numpy as np

        from searchbench.retrieval import EmbeddingClient
        from searchbench.retrieval.types import RetrieverConfig

        config = build_workspace(tmp_path)

        class HashingProvider:
            """Deterministic offline embedding endpoint: token-hash bag vectors.

            crc32 keeps vectors stable across processes (str hash is salted).
            """

            def __init__(self, dim=16):
                self.dim = dim

            def __call__(self, url, payload):
                import zlib

                vectors = []
                for text in payload["texts"]:
                    vec = [0.0] * self.dim
                    for token in text.lower().split():
                        vec[zlib.crc32(token.encode()) % self.dim] += 1.0
                    vectors.append(vec)
                return {"vectors": vectors}

        embed_client = EmbeddingClient(
            base_url="http://embed.test",
            model_id="hash-16",
            dim=16,
            cache_path=tmp_path / "cache.db",
            post=HashingProvider(),
            sleep=lambda s: None,
        )
        dense = RetrieverConfig(name="hash", kind="dense", model_id="hash-16")
        config.retrievers.append(dense)
        workspace = Workspace(config.data_dir)
        workspace.build_index("pyfix", dense, embed_client=embed_client)
        return config, embed_client

    def test_dense_search_via_api(self, tmp_path):
        config, embed_client = self.make_dense_config(tmp_path)
        app = create_app(config, embed_client=embed_client)
        with TestClient(app) as client:
            response = client.post(
                "/search",
                json={"query": "insert a value", "repo": "pyfix",
                      "retriever": "hash"},
            )
            assert response.status_code == 200, response.text
            results = response.json()["results"]
            assert len(results) > 0
            assert [r["rank"] for r in results] == list(range(1, len(results) + 1))
            # dense always returns k results when available (no zero-score cut)
            assert len(results) == min(10, 8)

    def test_dense_without_provider_is_409(self, tmp_path, monkeypatch):
        config, embed_client = self.make_dense_config(tmp_path)
        for var in ("EMBED_URL", "EMBED_MODEL", "EMBED_DIM"):
            monkeypatch.delenv(var, raising=False)
        app = create_app(config)  # no injected embed client
        with TestClient(app) as client:
            response = client.post(
                "/search",
                json={"query": "insert", "repo": "pyfix", "retriever": "hash"},
            )
        assert response.status_code == 409
        assert "EMBED_URL" in response.json()["detail"]

    def test_query_and_index_model_must_match(self, tmp_path):
        from searchbench.retrieval import EmbeddingClient

        config, embed_client = self.make_dense_config(tmp_path)
        other_model = EmbeddingClient(
            base_url="http://embed.test",
            model_id="different-model",
            dim=16,
            post=lambda url, payload: {"vectors": [[0.0] * 16 for _ in payload["texts"]]},
            sleep=lambda s: None,
        )
        workspace = Workspace(config.data_dir)
        dense = config.retrievers[-1]
        with pytest.raises(ValueError, match="does not match index model"):
            workspace.search("pyfix", dense, "query", embed_client=other_model)
