"""Walkthrough: the HTTP annotation service, its journal, and crash recovery.

The service wraps the active-learning engine for human annotators: it serves
the current query batch as tasks, validates submitted labels against the
annotation schema, and appends every accepted submission to a JSON-lines
journal *before* acknowledging it. Service state is a fold over that journal,
so a crashed instance restarted on the same file reproduces its progress
exactly — no database needed.

This demo drives the API in-process with a test client (the same app serves
over the network via `explicat serve`).

Run:  python3 demos/03_annotation_service.py
"""

import random
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from explicat import synthetic
from explicat.engine import Engine, EngineConfig
from explicat.schema import ALLabel
from explicat.service import AnnotationService, create_app

# -- 1. a small engine so rounds are quick to label --------------------------

dataset = synthetic.generate(seed=1, config=synthetic.SynthConfig(n_pairs=600))
annotated = dataset.annotated_sample(random.Random(1), n=150, n_positive=15)


def build_engine():
    config = EngineConfig(combined_rounds=2, combined_batch=6,
                          uncertainty_rounds=1, uncertainty_batch=3,
                          epochs=30, lr=0.3)
    return Engine.from_annotated(dataset.store, config, annotated, rng_seed=1,
                                 seed_size=40, test_size=60, seed_positives=10)


journal = Path(tempfile.mkdtemp(prefix="annotation-demo-")) / "journal.jsonl"
client = TestClient(create_app(AnnotationService(build_engine(), journal)))

print("current round:", client.get("/rounds/current").json())

# -- 2. an annotator pulls tasks and labels them -----------------------------

tasks = client.get("/tasks/next", params={"n": 3}).json()
print(f"\npulled {len(tasks)} open tasks; first one:")
print(f"  id={tasks[0]['record_id']} provenance={tasks[0]['provenance']}")


def label(task):
    """Play the annotator, answering from the generator's hidden labels."""
    truth = dataset.labels[task["record_id"]]
    if truth is ALLabel.TRUE:
        spans = dataset.spans.get(task["record_id"]) or [(0, 1)]
        return {"task_id": task["record_id"], "al_label": "TRUE",
                "spans": [{"tgt_start": s, "tgt_end": e} for s, e in spans],
                "types": ["ADD-INF"], "styles": ["A"] * len(spans)}
    return {"task_id": task["record_id"], "al_label": "FALSE"}


# an invalid submission (TRUE without spans/types) is rejected with reasons
bad = {"task_id": tasks[0]["record_id"], "al_label": "TRUE"}
resp = client.post("/labels", json={"submissions": [bad]})
print(f"\ninvalid submission -> HTTP {resp.status_code}, "
      f"violations: {resp.json()['detail'][0]['violations']}")

resp = client.post("/labels", json={"submissions": [label(t) for t in tasks]})
print(f"valid submissions -> HTTP {resp.status_code}, "
      f"{sum(r['accepted'] for r in resp.json()['results'])} accepted")

# advancing with open tasks is refused
print("premature advance ->", client.post("/rounds/advance").status_code, "(conflict)")

# -- 3. finish the round, advance, then simulate a crash ---------------------

rest = client.get("/tasks/next", params={"n": 100}).json()
if rest:
    client.post("/labels", json={"submissions": [label(t) for t in rest]})
print("\nadvance:", client.post("/rounds/advance").json())

half = client.get("/tasks/next", params={"n": 3}).json()
client.post("/labels", json={"submissions": [label(t) for t in half]})
before = client.get("/progress").json()
print("progress before crash:", before)

# "crash": throw the live service away; rebuild from the journal alone
revived = TestClient(create_app(AnnotationService(build_engine(), journal)))
after = revived.get("/progress").json()
print("progress after replay:", after)
print("identical:", before == after)

print(f"\njournal at {journal} "
      f"({sum(1 for _ in open(journal))} events); tail it to audit every label.")
