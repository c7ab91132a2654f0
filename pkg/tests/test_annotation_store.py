import itertools

import pytest

from searchbench.annotations import (
    AnnotationStore,
    ConflictError,
    QueryRecord,
    ReferentialError,
    normalize_query,
    query_identity,
)
from searchbench.retrieval.types import RankedResult


def make_store(tmp_path, name="annotations.db"):
    return AnnotationStore(tmp_path / name)


def seed_snapshot(store, query_id="q1", n=3):
    record = QueryRecord(query_id=query_id, text="find stack push", repo="r", retriever="fp")
    results = [
        RankedResult(entity_id=f"e{i}", rank=i + 1, score=1.0 / (i + 1))
        for i in range(n)
    ]
    store.snapshot_results(record, results)
    return record, results


class TestQueryIdentity:
    def test_same_inputs_same_id(self):
        a = query_identity("repo", "fp", "find stack push")
        b = query_identity("repo", "fp", "find stack push")
        assert a == b and len(a) == 16

    def test_normalization_strips_and_nfc(self):
        assert query_identity("r", "fp", "  q  ") == query_identity("r", "fp", "q")
        assert normalize_query("café") == normalize_query("café")

    def test_different_retriever_different_id(self):
        assert query_identity("r", "fp1", "q") != query_identity("r", "fp2", "q")


class TestSnapshots:
    def test_round_trip(self, tmp_path):
        store = make_store(tmp_path)
        record, results = seed_snapshot(store)
        assert store.snapshot(record.query_id) == results

    def test_idempotent_identical_snapshot(self, tmp_path):
        store = make_store(tmp_path)
        record, results = seed_snapshot(store)
        store.snapshot_results(record, results)  # no error
        assert store.snapshot(record.query_id) == results

    def test_divergent_snapshot_conflicts(self, tmp_path):
        store = make_store(tmp_path)
        record, results = seed_snapshot(store)
        changed = [
            RankedResult(entity_id="other", rank=1, score=0.5)
        ] + results[1:]
        with pytest.raises(ConflictError):
            store.snapshot_results(record, changed)

    def test_query_metadata_conflict(self, tmp_path):
        store = make_store(tmp_path)
        record, _ = seed_snapshot(store)
        clashing = QueryRecord(
            query_id=record.query_id, text="different text", repo="r", retriever="fp"
        )
        with pytest.raises(ConflictError):
            store.upsert_query(clashing)

    def test_queries_for_sorted(self, tmp_path):
        store = make_store(tmp_path)
        seed_snapshot(store, query_id="zz")
        seed_snapshot(store, query_id="aa")
        ids = [q.query_id for q in store.queries_for("r", "fp")]
        assert ids == ["aa", "zz"]


class TestRecordLabel:
    def test_latest_wins_correction(self, tmp_path):
        store = make_store(tmp_path)
        seed_snapshot(store)
        store.record_label("alice", "q1", "e0", 0)
        store.record_label("alice", "q1", "e0", 1)
        effective = store.effective_labels("alice")
        assert effective[("q1", "e0")].label == 1
        assert len(store.label_log("alice")) == 2  # append-only

    def test_single_record(self, tmp_path):
        store = make_store(tmp_path)
        seed_snapshot(store)
        store.record_label("alice", "q1", "e1", 1)
        assert store.effective_labels("alice")[("q1", "e1")].label == 1

    def test_unknown_pair_is_referential_error(self, tmp_path):
        store = make_store(tmp_path)
        seed_snapshot(store)
        with pytest.raises(ReferentialError):
            store.record_label("alice", "q1", "nope", 1)
        with pytest.raises(ReferentialError):
            store.record_label("alice", "missing", "e0", 1)

    def test_label_domain(self, tmp_path):
        store = make_store(tmp_path)
        seed_snapshot(store)
        with pytest.raises(ValueError):
            store.record_label("alice", "q1", "e0", 2)

    def test_interleaved_annotators_independent(self, tmp_path):
        # All 2x2 interleavings: each annotator's latest must win per annotator.
        for alice_labels, bob_labels in itertools.product(
            [(0, 1), (1, 0)], repeat=2
        ):
            store = make_store(tmp_path, f"s{alice_labels}{bob_labels}.db")
            seed_snapshot(store)
            store.record_label("alice", "q1", "e0", alice_labels[0])
            store.record_label("bob", "q1", "e0", bob_labels[0])
            store.record_label("alice", "q1", "e0", alice_labels[1])
            store.record_label("bob", "q1", "e0", bob_labels[1])
            assert store.effective_labels("alice")[("q1", "e0")].label == alice_labels[-1]
            assert store.effective_labels("bob")[("q1", "e0")].label == bob_labels[-1]
            store.close()

    def test_timestamps_strictly_monotone(self, tmp_path):
        store = make_store(tmp_path)
        seed_snapshot(store)
        stamps = [
            store.record_label("alice", "q1", "e0", i % 2).timestamp_ms
            for i in range(20)
        ]
        assert all(b > a for a, b in zip(stamps, stamps[1:]))


class TestExportMerge:
    def test_merge_own_export_is_identity(self, tmp_path):
        store = make_store(tmp_path)
        seed_snapshot(store)
        store.record_label("alice", "q1", "e0", 1)
        store.record_label("alice", "q1", "e1", 0)
        out = tmp_path / "export.jsonl"
        assert store.export_annotations(out, "alice") == 2
        assert store.merge_annotations(out) == 0  # nothing new
        assert len(store.label_log()) == 2

    def test_disjoint_annotators_union(self, tmp_path):
        left = make_store(tmp_path, "left.db")
        right = make_store(tmp_path, "right.db")
        seed_snapshot(left)
        seed_snapshot(right)
        left.record_label("alice", "q1", "e0", 1)
        right.record_label("bob", "q1", "e0", 0)
        out = tmp_path / "bob.jsonl"
        right.export_annotations(out, "bob")
        assert left.merge_annotations(out) == 1
        assert {a for a, _ in left.annotators()} == {"alice", "bob"}

    def test_newer_imported_timestamp_wins(self, tmp_path):
        store = make_store(tmp_path)
        seed_snapshot(store)
        local = store.record_label("alice", "q1", "e0", 0)
        imported = {
            "annotator_id": "alice",
            "query_id": "q1",
            "entity_id": "e0",
            "label": 1,
            "timestamp_ms": local.timestamp_ms + 5000,
            "source": "human",
        }
        store.merge_annotations([imported])
        assert store.effective_labels("alice")[("q1", "e0")].label == 1

    def test_older_imported_timestamp_does_not_win(self, tmp_path):
        store = make_store(tmp_path)
        seed_snapshot(store)
        local = store.record_label("alice", "q1", "e0", 0)
        imported = dict(
            annotator_id="alice",
            query_id="q1",
            entity_id="e0",
            label=1,
            timestamp_ms=local.timestamp_ms - 5000,
            source="human",
        )
        store.merge_annotations([imported])
        assert store.effective_labels("alice")[("q1", "e0")].label == 0

    def test_merge_commutative_on_effective_views(self, tmp_path):
        batch_a = [
            dict(annotator_id="x", query_id="q", entity_id="e", label=1,
                 timestamp_ms=100, source="human"),
            dict(annotator_id="y", query_id="q", entity_id="e", label=0,
                 timestamp_ms=150, source="human"),
        ]
        batch_b = [
            dict(annotator_id="x", query_id="q", entity_id="e", label=0,
                 timestamp_ms=200, source="human"),
        ]
        ab = make_store(tmp_path, "ab.db")
        ab.merge_annotations(batch_a)
        ab.merge_annotations(batch_b)
        ba = make_store(tmp_path, "ba.db")
        ba.merge_annotations(batch_b)
        ba.merge_annotations(batch_a)
        assert ab.effective_labels("x") == ba.effective_labels("x")
        assert ab.effective_labels("y") == ba.effective_labels("y")

    def test_identity_collision_rejected_with_names(self, tmp_path):
        store = make_store(tmp_path)
        seed_snapshot(store)
        store.record_label("gpt-x", "q1", "e0", 1, source="llm")
        clash = dict(
            annotator_id="gpt-x", query_id="q1", entity_id="e0",
            label=1, timestamp_ms=999, source="human",
        )
        with pytest.raises(ConflictError, match="gpt-x"):
            store.merge_annotations([clash])

    def test_malformed_import_rejected(self, tmp_path):
        store = make_store(tmp_path)
        with pytest.raises(ValueError):
            store.merge_annotations([{"annotator_id": "a"}])
        with pytest.raises(ValueError):
            store.merge_annotations(
                [dict(annotator_id="a", query_id="q", entity_id="e",
                      label=3, timestamp_ms=1, source="human")]
            )

    def test_replay_reproduces_view(self, tmp_path):
        store = make_store(tmp_path)
        seed_snapshot(store)
        store.record_label("alice", "q1", "e0", 0)
        store.record_label("alice", "q1", "e0", 1)
        store.record_label("alice", "q1", "e2", 0)
        out = tmp_path / "log.jsonl"
        store.export_annotations(out)
        replayed = make_store(tmp_path, "replay.db")
        replayed.merge_annotations(out)
        assert replayed.effective_labels("alice") == store.effective_labels("alice")


class TestMergeAssociativity:
    def batches(self):
        return [
            [dict(annotator_id="x", query_id="q", entity_id="e", label=1,
                  timestamp_ms=100, source="human")],
            [dict(annotator_id="x", query_id="q", entity_id="e", label=0,
                  timestamp_ms=300, source="human"),
             dict(annotator_id="y", query_id="q", entity_id="e", label=1,
                  timestamp_ms=200, source="human")],
            [dict(annotator_id="x", query_id="q", entity_id="e", label=1,
                  timestamp_ms=250, source="human")],
        ]

    def test_merge_associative_on_effective_views(self, tmp_path):
        import itertools

        views = []
        for i, order in enumerate(itertools.permutations(range(3))):
            store = make_store(tmp_path, f"assoc{i}.db")
            batches = self.batches()
            for j in order:
                store.merge_annotations(batches[j])
            views.append(
                (store.effective_labels("x"), store.effective_labels("y"))
            )
            store.close()
        assert all(v == views[0] for v in views[1:])
