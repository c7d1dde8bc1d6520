"""Evaluation: confusion counts, accuracy/P/R/F1, cross-lingual tables, learning curves.

F1 is reported for the positive (explicitation) class. DISCARD test items are
excluded from the counts and reported separately.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .errors import EmptyTestSet
from .schema import ALLabel


@dataclass(frozen=True)
class Confusion:
    tp: int
    fp: int
    tn: int
    fn: int
    n_discarded: int = 0

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class MetricsRow:
    checkpoint: str
    lang_pair: str
    accuracy: float
    precision: float
    recall: float
    f1: float
    n_test: int

    def as_dict(self) -> dict:
        return {
            "checkpoint": self.checkpoint,
            "lang_pair": self.lang_pair,
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "n_test": self.n_test,
        }


CSV_COLUMNS = ("checkpoint", "lang_pair", "accuracy", "precision", "recall", "f1", "n_test")


def confusion(
    scores: Sequence[float], labels: Sequence[ALLabel], threshold: float = 0.5
) -> Confusion:
    if len(scores) != len(labels):
        raise ValueError(f"{len(scores)} scores for {len(labels)} labels")
    tp = fp = tn = fn = discarded = 0
    for p, lab in zip(scores, labels):
        if lab is ALLabel.DISCARD:
            discarded += 1
            continue
        predicted_pos = p >= threshold
        actual_pos = lab is ALLabel.TRUE
        if predicted_pos and actual_pos:
            tp += 1
        elif predicted_pos:
            fp += 1
        elif actual_pos:
            fn += 1
        else:
            tn += 1
    return Confusion(tp=tp, fp=fp, tn=tn, fn=fn, n_discarded=discarded)


def metrics(conf: Confusion, checkpoint: str = "", lang_pair: str = "") -> MetricsRow:
    n = conf.n
    accuracy = (conf.tp + conf.tn) / n if n else 0.0
    precision = conf.tp / (conf.tp + conf.fp) if (conf.tp + conf.fp) else 0.0
    recall = conf.tp / (conf.tp + conf.fn) if (conf.tp + conf.fn) else 0.0
    f1 = 2 * precision * recall / (precision + recall) if (precision + recall) else 0.0
    return MetricsRow(
        checkpoint=checkpoint,
        lang_pair=lang_pair,
        accuracy=accuracy,
        precision=precision,
        recall=recall,
        f1=f1,
        n_test=n,
    )


def cross_lingual_eval(
    predict,
    test_sets: Mapping[str, tuple[Sequence, Sequence[ALLabel]]],
    checkpoint: str = "",
    threshold: float = 0.5,
) -> list[MetricsRow]:
    """Evaluate one model on per-language test sets; one row per language.

    `predict` maps a sequence of instances to scores. Languages are evaluated
    in sorted order so the output is deterministic.
    """
    rows = []
    for lang in sorted(test_sets):
        instances, labels = test_sets[lang]
        if not instances:
            raise EmptyTestSet(f"empty test set for {lang}")
        scores = predict(instances)
        rows.append(metrics(confusion(scores, labels, threshold), checkpoint, lang))
    return rows


def write_metrics_csv(rows: Sequence[MetricsRow], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row.as_dict())


def write_metrics_json(rows: Sequence[MetricsRow], path: str | Path) -> None:
    Path(path).write_text(
        json.dumps([r.as_dict() for r in rows], indent=2) + "\n", encoding="utf-8"
    )


def learning_curve(rows: Sequence[MetricsRow]) -> list[dict]:
    """Checkpoint-ordered curve with accuracy/F1 deltas between consecutive rows."""
    curve = []
    prev: MetricsRow | None = None
    for row in rows:
        entry = row.as_dict()
        entry["accuracy_delta"] = row.accuracy - prev.accuracy if prev else 0.0
        entry["f1_delta"] = row.f1 - prev.f1 if prev else 0.0
        curve.append(entry)
        prev = row
    return curve
