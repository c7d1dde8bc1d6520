"""HTTP annotation service: serves query batches to annotators, journals labels.

The service is the human label sink of the active-learning loop. Accepted
submissions are appended to a JSON-lines journal before they are
acknowledged; service state is a fold over that journal, so a crashed
instance restarted on the same journal reproduces its progress exactly.
Advancing a round merges the collected labels into the engine and retrains.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import strategies as st
from .engine import AnnotationTask, Engine
from .errors import ValidationFailure
from .schema import (
    ALLabel,
    AnnotatedRecord,
    DatasetTag,
    RecordSpan,
    StyleTag,
    TypeTag,
    validate,
)


class SpanModel(BaseModel):
    tgt_start: int
    tgt_end: int
    src_start: int | None = None
    src_end: int | None = None


class SubmissionModel(BaseModel):
    task_id: str
    al_label: str
    spans: list[SpanModel] = Field(default_factory=list)
    types: list[str] = Field(default_factory=list)
    styles: list[str] = Field(default_factory=list)
    annotator: str = "anonymous"
    timestamp: str | None = None


class SubmissionBatch(BaseModel):
    submissions: list[SubmissionModel]


def _submission_to_record(sub: SubmissionModel, task: AnnotationTask) -> AnnotatedRecord:
    try:
        return AnnotatedRecord(
            id=sub.task_id,
            source=task.source,
            target=task.target,
            spans=tuple(
                RecordSpan(s.tgt_start, s.tgt_end, s.src_start, s.src_end)
                for s in sub.spans
            ),
            types=tuple(TypeTag(t) for t in sub.types),
            styles=tuple(StyleTag(s) for s in sub.styles),
            dataset=DatasetTag.TRAIN,
            al_label=ALLabel(sub.al_label),
        )
    except ValueError as exc:
        raise ValidationFailure([f"{sub.task_id}: {exc}"]) from exc


def _record_hash(record: AnnotatedRecord) -> str:
    return hashlib.sha256(record.to_json().encode("utf-8")).hexdigest()


class AnnotationService:
    """Round/task/submission bookkeeping around an Engine, backed by a journal."""

    def __init__(self, engine: Engine, journal_path: str | Path):
        self.engine = engine
        self.journal_path = Path(journal_path)
        self._lock = threading.Lock()
        self.batch: st.QueryBatch | None = None
        self.tasks: dict[str, AnnotationTask] = {}
        self.submissions: dict[str, AnnotatedRecord] = {}
        self._hashes: dict[str, str] = {}
        if self.journal_path.exists() and self.journal_path.stat().st_size > 0:
            self._replay()
        else:
            self._bootstrap()

    # -- schedule position ----------------------------------------------

    def _phase(self) -> tuple[str, int, Sequence[str]] | None:
        cfg = self.engine.config
        r = self.engine.state.round
        if r < cfg.combined_rounds:
            return ("combined", cfg.combined_batch, cfg.rotation[r % len(cfg.rotation)])
        if r < cfg.combined_rounds + cfg.uncertainty_rounds:
            return ("uncertainty", cfg.uncertainty_batch, [cfg.uncertainty_strategy])
        return None

    def _bootstrap(self) -> None:
        if self.engine.state.model is None:
            self.engine.retrain()
        self._open_next_batch()

    def _open_next_batch(self) -> None:
        phase = self._phase()
        if phase is None:
            self.batch = None
            self.tasks = {}
            return
        _, batch_size, names = phase
        self.batch = self.engine.compose_round_batch(names, batch_size)
        self.tasks = {
            t.record_id: t for t in self.engine.tasks_for_batch(self.batch)
        }
        self._append(
            {
                "event": "batch",
                "round": self.batch.round_index,
                "ids": list(self.batch.ids),
                "provenance": self.batch.provenance,
            }
        )

    # -- journal ---------------------------------------------------------

    def _append(self, event: dict) -> None:
        with self._lock:
            with open(self.journal_path, "a", encoding="utf-8", newline="\n") as fh:
                fh.write(json.dumps(event, sort_keys=True, ensure_ascii=False) + "\n")
                fh.flush()
                os.fsync(fh.fileno())

    def _replay(self) -> None:
        """Rebuild open tasks, submissions, and engine rounds from the journal."""
        if self.engine.state.model is None:
            self.engine.retrain()
        with open(self.journal_path, encoding="utf-8") as fh:
            events = [json.loads(line) for line in fh if line.strip()]
        for event in events:
            kind = event["event"]
            if kind == "batch":
                self.batch = st.QueryBatch(
                    round_index=event["round"],
                    ids=tuple(event["ids"]),
                    provenance=dict(event["provenance"]),
                )
                self.tasks = {
                    t.record_id: t for t in self.engine.tasks_for_batch(self.batch)
                }
                self.submissions = {}
                self._hashes = {}
            elif kind == "submission":
                record = AnnotatedRecord.from_dict(event["record"])
                self.submissions[record.id] = record
                self._hashes[record.id] = event["hash"]
            elif kind == "advance":
                self._merge_current(journal=False)
        # engine.compose_round_batch draws rng state; batches after replay come
        # from the journal, so the stream stays aligned with the original run

    # -- operations ------------------------------------------------------

    def open_tasks(self) -> list[AnnotationTask]:
        return [
            self.tasks[i]
            for i in (self.batch.ids if self.batch else ())
            if i not in self.submissions
        ]

    def submit(self, subs: Sequence[SubmissionModel]) -> list[dict]:
        """Validate each submission; journal and store the accepted ones."""
        results = []
        for sub in subs:
            task = self.tasks.get(sub.task_id)
            if task is None:
                results.append(
                    {"task_id": sub.task_id, "accepted": False,
                     "violations": ["unknown or closed task"]}
                )
                continue
            try:
                record = _submission_to_record(sub, task)
            except ValidationFailure as exc:
                results.append(
                    {"task_id": sub.task_id, "accepted": False, "violations": exc.violations}
                )
                continue
            violations = validate(record)
            if violations:
                results.append(
                    {"task_id": sub.task_id, "accepted": False, "violations": violations}
                )
                continue
            digest = _record_hash(record)
            if self._hashes.get(sub.task_id) == digest:
                # exact duplicate: idempotent accept without re-journaling
                results.append({"task_id": sub.task_id, "accepted": True, "violations": []})
                continue
            self._append(
                {"event": "submission", "task_id": sub.task_id,
                 "hash": digest, "record": record.to_dict()}
            )
            self.submissions[sub.task_id] = record
            self._hashes[sub.task_id] = digest
            results.append({"task_id": sub.task_id, "accepted": True, "violations": []})
        return results

    def _merge_current(self, journal: bool = True) -> None:
        assert self.batch is not None
        phase = self._phase()
        phase_name = phase[0] if phase else "augment"
        records = [self.submissions[i] for i in self.batch.ids]
        self.engine.merge_labels(self.batch, records, phase_name)
        if journal:
            self._append({"event": "advance", "round": self.engine.state.round})
        cfg = self.engine.config
        if self.engine.state.round == cfg.combined_rounds:
            self.engine._checkpoint("L8")
        elif self.engine.state.round == cfg.combined_rounds + cfg.uncertainty_rounds:
            self.engine._checkpoint("L13")
        self.submissions = {}
        self._hashes = {}
        if journal:
            self._open_next_batch()
        else:
            self.batch = None
            self.tasks = {}

    def advance(self) -> dict:
        if self.batch is None:
            raise HTTPException(status_code=409, detail="no open round")
        open_ids = [i for i in self.batch.ids if i not in self.submissions]
        if open_ids:
            raise HTTPException(
                status_code=409,
                detail=f"{len(open_ids)} open task(s) remain in round {self.batch.round_index}",
            )
        self._merge_current()
        return self.round_info()

    def round_info(self) -> dict:
        phase = self._phase()
        return {
            "round": self.engine.state.round,
            "phase": phase[0] if phase else "done",
            "batch_size": len(self.batch.ids) if self.batch else 0,
            "open_tasks": len(self.open_tasks()),
        }

    def progress(self) -> dict:
        counts = {"TRUE": 0, "FALSE": 0, "DISCARD": 0}
        for rec in self.submissions.values():
            counts[rec.al_label.value] += 1
        total = {"TRUE": 0, "FALSE": 0, "DISCARD": 0}
        for rec in self.engine.state.labeled.values():
            total[rec.al_label.value] += 1
        return {
            "round": self.engine.state.round,
            "current_round_counts": counts,
            "labeled_total_counts": total,
            "submitted": len(self.submissions),
            "open_tasks": len(self.open_tasks()),
        }


def create_app(service: AnnotationService, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="explicat annotation service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/rounds/current")
    def rounds_current() -> dict:
        return service.round_info()

    @app.get("/tasks/next")
    def tasks_next(n: int = 10) -> list[dict]:
        return [t.to_dict() for t in service.open_tasks()[:n]]

    @app.post("/labels")
    def post_labels(batch: SubmissionBatch):
        if not batch.submissions:
            raise HTTPException(status_code=422, detail="empty submission list")
        results = service.submit(batch.submissions)
        if all(not r["accepted"] for r in results):
            raise HTTPException(status_code=422, detail=results)
        return {"results": results}

    @app.post("/rounds/advance")
    def rounds_advance() -> dict:
        try:
            return service.advance()
        except ValidationFailure as exc:
            raise HTTPException(status_code=422, detail=exc.violations) from exc

    @app.get("/progress")
    def progress() -> dict:
        return service.progress()

    @app.get("/records/{record_id}")
    def get_record(record_id: str) -> dict:
        rec = service.engine.state.labeled.get(record_id)
        if rec is None:
            raise HTTPException(status_code=404, detail=f"unknown record {record_id}")
        return rec.to_dict()

    @app.get("/schema/tags")
    def schema_tags() -> dict:
        by_category: dict[str, list[str]] = {}
        for tag in TypeTag:
            by_category.setdefault(tag.category.value, []).append(tag.value)
        return {"categories": by_category, "styles": [s.value for s in StyleTag],
                "labels": [l.value for l in ALLabel]}

    @app.post("/render/brackets")
    def render(record: dict) -> dict:
        from .schema import render_brackets

        rec = AnnotatedRecord.from_dict(record)
        src, tgt = render_brackets(rec)
        return {"source": src, "target": tgt}

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
