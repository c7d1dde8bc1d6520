import random

import pytest
from fastapi.testclient import TestClient

from explicat import engine as eng
from explicat import synthetic
from explicat.schema import ALLabel
from explicat.service import AnnotationService, create_app


@pytest.fixture(scope="module")
def dataset():
    return synthetic.generate(seed=23, config=synthetic.SynthConfig(n_pairs=600))


@pytest.fixture(scope="module")
def annotated(dataset):
    return dataset.annotated_sample(random.Random(2), n=150, n_positive=15)


def make_engine(dataset, annotated):
    config = eng.EngineConfig(
        combined_rounds=2, combined_batch=8,
        uncertainty_rounds=1, uncertainty_batch=4,
        epochs=20, lr=0.3,
    )
    return eng.Engine.from_annotated(
        dataset.store, config, annotated, rng_seed=3,
        seed_size=40, test_size=60, seed_positives=10,
    )


@pytest.fixture()
def client(tmp_path, dataset, annotated):
    service = AnnotationService(make_engine(dataset, annotated), tmp_path / "journal.jsonl")
    return TestClient(create_app(service)), service


def _submission_for(task, dataset):
    label = dataset.labels[task["record_id"]]
    if label is ALLabel.TRUE:
        raw = dataset.spans.get(task["record_id"]) or [(0, 1)]
        return {
            "task_id": task["record_id"],
            "al_label": "TRUE",
            "spans": [{"tgt_start": s, "tgt_end": e} for s, e in raw],
            "types": ["ADD-INF"],
            "styles": ["A"] * len(raw),
        }
    return {"task_id": task["record_id"], "al_label": "FALSE"}


def _label_whole_round(client, dataset):
    tasks = client.get("/tasks/next", params={"n": 100}).json()
    subs = [_submission_for(t, dataset) for t in tasks]
    resp = client.post("/labels", json={"submissions": subs})
    assert resp.status_code == 200
    return tasks


class TestEndpoints:
    def test_round_current_shape(self, client):
        http, _ = client
        info = http.get("/rounds/current").json()
        assert info["round"] == 0
        assert info["phase"] == "combined"
        assert info["batch_size"] == 8
        assert info["open_tasks"] == 8

    def test_tasks_next_pagination(self, client):
        http, _ = client
        assert len(http.get("/tasks/next", params={"n": 3}).json()) == 3
        assert len(http.get("/tasks/next", params={"n": 100}).json()) == 8

    def test_schema_tags(self, client):
        http, _ = client
        data = http.get("/schema/tags").json()
        assert set(data["categories"]) == {"ENT", "LING", "SYS", "ADD"}
        assert sum(len(v) for v in data["categories"].values()) == 19
        assert data["labels"] == ["TRUE", "FALSE", "DISCARD"]

    def test_record_404(self, client):
        http, _ = client
        assert http.get("/records/nope").status_code == 404

    def test_record_found_after_submit(self, client, dataset):
        http, _ = client
        tasks = _label_whole_round(http, dataset)
        http.post("/rounds/advance")
        rec = http.get(f"/records/{tasks[0]['record_id']}").json()
        assert rec["id"] == tasks[0]["record_id"]

    def test_render_endpoint(self, client):
        http, _ = client
        record = {
            "id": "x", "source": "a b", "target": "a b c",
            "spans": [{"tgt_start": 2, "tgt_end": 3}],
            "types": ["ADD-INF"], "styles": ["A"],
            "dataset": "POOL", "al_label": "TRUE",
        }
        out = http.post("/render/brackets", json=record).json()
        assert out["target"] == "a b [ c ]"


class TestSubmissionFlow:
    def test_empty_submission_422(self, client):
        http, _ = client
        assert http.post("/labels", json={"submissions": []}).status_code == 422

    def test_all_rejected_422(self, client):
        http, _ = client
        bad = [{"task_id": "unknown-id", "al_label": "FALSE"}]
        resp = http.post("/labels", json={"submissions": bad})
        assert resp.status_code == 422

    def test_partial_accept_200(self, client, dataset):
        http, _ = client
        task = http.get("/tasks/next", params={"n": 1}).json()[0]
        subs = [
            _submission_for(task, dataset),
            {"task_id": "unknown-id", "al_label": "FALSE"},
        ]
        resp = http.post("/labels", json={"submissions": subs})
        assert resp.status_code == 200
        results = resp.json()["results"]
        assert [r["accepted"] for r in results] == [True, False]

    def test_invalid_record_rejected_with_violations(self, client):
        http, _ = client
        task = http.get("/tasks/next", params={"n": 1}).json()[0]
        # TRUE without spans or types fails the schema contract
        resp = http.post(
            "/labels",
            json={"submissions": [{"task_id": task["record_id"], "al_label": "TRUE"}]},
        )
        assert resp.status_code == 422
        assert resp.json()["detail"][0]["violations"]

    def test_duplicate_submission_idempotent(self, client, dataset):
        http, service = client
        task = http.get("/tasks/next", params={"n": 1}).json()[0]
        sub = _submission_for(task, dataset)
        assert http.post("/labels", json={"submissions": [sub]}).status_code == 200
        journal_size = service.journal_path.stat().st_size
        # resending the identical submission is accepted but not re-journaled
        resp = http.post("/labels", json={"submissions": [sub]})
        assert resp.status_code == 200
        assert resp.json()["results"][0]["accepted"]
        assert service.journal_path.stat().st_size == journal_size

    def test_advance_409_with_open_tasks(self, client, dataset):
        http, _ = client
        task = http.get("/tasks/next", params={"n": 1}).json()[0]
        http.post("/labels", json={"submissions": [_submission_for(task, dataset)]})
        resp = http.post("/rounds/advance")
        assert resp.status_code == 409
        assert "open task" in resp.json()["detail"]

    def test_full_schedule_over_http(self, client, dataset):
        http, _ = client
        for expected_round in range(3):  # 2 combined + 1 uncertainty
            info = http.get("/rounds/current").json()
            assert info["round"] == expected_round
            _label_whole_round(http, dataset)
            resp = http.post("/rounds/advance")
            assert resp.status_code == 200
        done = http.get("/rounds/current").json()
        assert done["phase"] == "done"
        assert done["open_tasks"] == 0
        # advancing past the end is a conflict
        assert http.post("/rounds/advance").status_code == 409

    def test_progress_counts(self, client, dataset):
        http, _ = client
        tasks = _label_whole_round(http, dataset)
        prog = http.get("/progress").json()
        assert prog["submitted"] == len(tasks)
        assert prog["open_tasks"] == 0
        counts = prog["current_round_counts"]
        assert sum(counts.values()) == len(tasks)
        totals = prog["labeled_total_counts"]
        assert sum(totals.values()) == 40  # seed only until the round advances


class TestCrashRecovery:
    def test_replay_reproduces_progress(self, tmp_path, dataset, annotated):
        journal = tmp_path / "journal.jsonl"
        service = AnnotationService(make_engine(dataset, annotated), journal)
        http = TestClient(create_app(service))

        _label_whole_round(http, dataset)
        http.post("/rounds/advance")
        half = http.get("/tasks/next", params={"n": 4}).json()
        http.post(
            "/labels",
            json={"submissions": [_submission_for(t, dataset) for t in half]},
        )
        before = http.get("/progress").json()
        before_round = http.get("/rounds/current").json()

        # simulate a crash: fresh engine + fresh service on the same journal
        revived = AnnotationService(make_engine(dataset, annotated), journal)
        http2 = TestClient(create_app(revived))
        assert http2.get("/progress").json() == before
        assert http2.get("/rounds/current").json() == before_round
        # the revived service continues to completion
        _label_whole_round(http2, dataset)
        assert http2.post("/rounds/advance").status_code == 200
        _label_whole_round(http2, dataset)
        assert http2.post("/rounds/advance").status_code == 200
        assert http2.get("/rounds/current").json()["phase"] == "done"

    def test_open_tasks_exclude_replayed_submissions(self, tmp_path, dataset, annotated):
        journal = tmp_path / "journal.jsonl"
        service = AnnotationService(make_engine(dataset, annotated), journal)
        http = TestClient(create_app(service))
        task = http.get("/tasks/next", params={"n": 1}).json()[0]
        http.post("/labels", json={"submissions": [_submission_for(task, dataset)]})

        revived = AnnotationService(make_engine(dataset, annotated), journal)
        open_ids = {t.record_id for t in revived.open_tasks()}
        assert task["record_id"] not in open_ids
        assert len(open_ids) == 7
