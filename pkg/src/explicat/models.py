"""Classifier and embedder contracts, feature extraction, and the linear baseline.

The production setup fine-tunes an external multilingual encoder behind the
batch-file adapter; the built-in baseline is a deterministic logistic model
over hand-crafted lexical/POS/alignment features so the full active-learning
loop runs without any external process.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, Sequence, runtime_checkable

import numpy as np

from .corpus import AlignmentSet, SentencePair
from .errors import (
    AdapterTimeout,
    DegenerateLabels,
    MalformedScores,
    SeparatorCollision,
    TaggerFailure,
)
from .extraction import null_target_indices
from .schema import ALLabel
from .taggers import ALLOWED_NE_LABELS, Tagger

DEFAULT_SEPARATOR = "⟐SEP⟐"

# small built-in unit lexicon for the measurement-related feature
UNIT_LEXICON = frozenset(
    {
        "mile", "miles", "feet", "foot", "lb", "lbs", "pound", "pounds",
        "degree", "degrees", "knot", "knots", "km", "kg", "m",
    }
)


@dataclass(frozen=True)
class PackedInstance:
    """Source and target joined into one classifier input string."""

    pair_id: str
    text: str

    def sides(self, separator: str = DEFAULT_SEPARATOR) -> tuple[str, str]:
        src, tgt = self.text.split(f" {separator} ", 1)
        return src, tgt


def pack(pair: SentencePair, separator: str = DEFAULT_SEPARATOR) -> PackedInstance:
    if not pair.src_text or not pair.tgt_text:
        raise ValueError(f"pair {pair.id}: empty side cannot be packed")
    if separator in pair.src_text or separator in pair.tgt_text:
        raise SeparatorCollision(f"separator {separator!r} occurs in pair {pair.id}")
    return PackedInstance(pair_id=pair.id, text=f"{pair.src_text} {separator} {pair.tgt_text}")


FEATURE_NAMES = (
    "n_null_tokens",
    "frac_null",
    "n_null_nouns",
    "n_null_propns",
    "n_null_prons",
    "has_allowed_ne_src",
    "has_allowed_ne_tgt",
    "length_ratio",
    "has_parenthesis_in_target",
    "has_bracket_addition",
    "digit_token_count_delta",
    "unit_lexicon_hits",
)


@dataclass(frozen=True)
class FeatureVector:
    n_null_tokens: float
    frac_null: float
    n_null_nouns: float
    n_null_propns: float
    n_null_prons: float
    has_allowed_ne_src: float
    has_allowed_ne_tgt: float
    length_ratio: float
    has_parenthesis_in_target: float
    has_bracket_addition: float
    digit_token_count_delta: float
    unit_lexicon_hits: float

    def to_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in FEATURE_NAMES], dtype=float)


def _count_digit_tokens(tokens: Sequence[str]) -> int:
    return sum(1 for t in tokens if any(ch.isdigit() for ch in t))


def featurize(pair: SentencePair, alignment: AlignmentSet, tagger: Tagger) -> FeatureVector:
    """Deterministic lexical/POS/alignment features for one sentence pair."""
    nulls = null_target_indices(pair, alignment)
    try:
        tgt_pos = tagger.pos(pair.tgt_tokens, pair.tgt_lang)
        src_ner = tagger.ner(pair.src_tokens, pair.src_lang)
        tgt_ner = tagger.ner(pair.tgt_tokens, pair.tgt_lang)
    except TaggerFailure:
        raise
    except Exception as exc:
        raise TaggerFailure(f"pair {pair.id}: {exc}") from exc

    n_tgt = len(pair.tgt_tokens)
    null_pos = [tgt_pos[j] for j in nulls]
    vec = FeatureVector(
        n_null_tokens=float(len(nulls)),
        frac_null=len(nulls) / n_tgt if n_tgt else 0.0,
        n_null_nouns=float(sum(1 for p in null_pos if p == "NOUN")),
        n_null_propns=float(sum(1 for p in null_pos if p == "PROPN")),
        n_null_prons=float(sum(1 for p in null_pos if p == "PRON")),
        has_allowed_ne_src=float(any(l in ALLOWED_NE_LABELS for l, _, _ in src_ner)),
        has_allowed_ne_tgt=float(any(l in ALLOWED_NE_LABELS for l, _, _ in tgt_ner)),
        length_ratio=n_tgt / len(pair.src_tokens) if pair.src_tokens else 0.0,
        has_parenthesis_in_target=float("(" in pair.tgt_tokens or ")" in pair.tgt_tokens),
        has_bracket_addition=float("[" in pair.tgt_tokens or "]" in pair.tgt_tokens),
        digit_token_count_delta=float(
            _count_digit_tokens(pair.tgt_tokens) - _count_digit_tokens(pair.src_tokens)
        ),
        unit_lexicon_hits=float(
            sum(1 for t in pair.tgt_tokens if t.lower() in UNIT_LEXICON)
        ),
    )
    return vec


@runtime_checkable
class BinaryClassifier(Protocol):
    def fit(self, features: Sequence[FeatureVector], labels: Sequence[ALLabel],
            epochs: int = 10, seed: int = 0) -> None: ...

    def predict(self, features: Sequence[FeatureVector]) -> list[float]: ...


@runtime_checkable
class SentenceEmbedder(Protocol):
    def embed(self, instance: PackedInstance) -> np.ndarray: ...


@dataclass
class LogisticModel:
    weights: np.ndarray
    bias: float
    loss_history: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"weights": self.weights.tolist(), "bias": self.bias}

    @classmethod
    def from_dict(cls, d: dict) -> "LogisticModel":
        return cls(weights=np.array(d["weights"], dtype=float), bias=float(d["bias"]))


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def baseline_fit(
    features: Sequence[FeatureVector],
    labels: Sequence[ALLabel],
    epochs: int = 10,
    lr: float = 0.1,
    seed: int = 0,
    max_pos_weight: float = 10.0,
) -> LogisticModel:
    """Full-batch gradient descent on weighted logistic loss.

    DISCARD instances are dropped before fitting. Gradients are averaged over
    (weighted) examples, so duplicating the training set leaves the fitted
    parameters unchanged. With lr below 8/lambda_max(X^T W X / n) the training
    loss is non-increasing per epoch.
    """
    keep = [(f, y) for f, y in zip(features, labels) if y is not ALLabel.DISCARD]
    if not keep:
        raise DegenerateLabels("no TRUE/FALSE instances to fit")
    X = np.stack([f.to_array() for f, _ in keep])
    y = np.array([1.0 if lab is ALLabel.TRUE else 0.0 for _, lab in keep])
    n_pos = int(y.sum())
    n_neg = len(y) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateLabels(f"single-class input ({n_pos} positive, {n_neg} negative)")

    pos_weight = min(n_neg / n_pos, max_pos_weight)
    w_sample = np.where(y == 1.0, pos_weight, 1.0)
    w_sum = w_sample.sum()

    weights = np.zeros(X.shape[1])
    bias = 0.0
    history: list[float] = []
    for _ in range(epochs):
        z = X @ weights + bias
        p = _sigmoid(z)
        # weighted mean log loss, clipped away from 0/1 for finiteness
        pc = np.clip(p, 1e-12, 1.0 - 1e-12)
        loss = -float(np.sum(w_sample * (y * np.log(pc) + (1 - y) * np.log(1 - pc))) / w_sum)
        history.append(loss)
        grad_z = w_sample * (p - y) / w_sum
        weights = weights - lr * (X.T @ grad_z)
        bias = bias - lr * float(grad_z.sum())
    return LogisticModel(weights=weights, bias=bias, loss_history=history)


def baseline_predict(model: LogisticModel, features: Sequence[FeatureVector]) -> list[float]:
    if not features:
        return []
    X = np.stack([f.to_array() for f in features])
    p = _sigmoid(X @ model.weights + model.bias)
    # scores stay strictly inside (0, 1)
    return [float(min(max(v, 1e-12), 1.0 - 1e-12)) for v in p]


@dataclass
class BaselineClassifier:
    """BinaryClassifier over FeatureVectors, backed by the logistic baseline."""

    lr: float = 0.1
    max_pos_weight: float = 10.0
    model: LogisticModel | None = None

    def fit(self, features, labels, epochs: int = 10, seed: int = 0) -> None:
        self.model = baseline_fit(
            features, labels, epochs=epochs, lr=self.lr, seed=seed,
            max_pos_weight=self.max_pos_weight,
        )

    def predict(self, features) -> list[float]:
        if self.model is None:
            raise RuntimeError("predict before fit")
        return baseline_predict(self.model, features)


@dataclass
class HashingEmbedder:
    """Deterministic bag-of-words feature hashing into a fixed-dimension sphere."""

    dim: int = 64

    def embed(self, instance: PackedInstance) -> np.ndarray:
        vec = np.zeros(self.dim)
        for token in instance.text.split():
            digest = hashlib.md5(token.lower().encode("utf-8")).digest()
            idx = int.from_bytes(digest[:4], "little") % self.dim
            sign = 1.0 if digest[4] % 2 == 0 else -1.0
            vec[idx] += sign
        norm = np.linalg.norm(vec)
        return vec / norm if norm > 0 else vec


ADAPTER_COMMAND_ENV = "EXPLICAT_ADAPTER_CMD"


@dataclass
class ExternalEncoderAdapter:
    """Batch-file bridge to an externally fine-tuned encoder.

    Exchange format: requests are JSON lines {"id", "text"} (fit requests add
    "label"); responses are JSON lines {"id", "p"}. The command is invoked as
    `<cmd> fit <in>` and `<cmd> predict <in> <out>`.
    """

    command: str | None = None
    timeout: float = 60.0
    workdir: str | None = None

    def _cmd(self) -> list[str]:
        cmd = self.command or os.environ.get(ADAPTER_COMMAND_ENV)
        if not cmd:
            raise RuntimeError(f"adapter command not set ({ADAPTER_COMMAND_ENV})")
        return cmd.split()

    def _run(self, args: list[str]) -> None:
        try:
            subprocess.run(self._cmd() + args, check=True, timeout=self.timeout)
        except subprocess.TimeoutExpired as exc:
            raise AdapterTimeout(f"adapter exceeded {self.timeout}s") from exc

    def fit(self, instances: Sequence[PackedInstance], labels: Sequence[ALLabel],
            epochs: int = 10, seed: int = 0) -> None:
        with tempfile.TemporaryDirectory(dir=self.workdir) as tmp:
            req = Path(tmp) / "train.jsonl"
            with open(req, "w", encoding="utf-8") as fh:
                for inst, lab in zip(instances, labels):
                    if lab is ALLabel.DISCARD:
                        continue
                    fh.write(json.dumps(
                        {"id": inst.pair_id, "text": inst.text, "label": lab.value}
                    ) + "\n")
            self._run(["fit", str(req)])

    def predict(self, instances: Sequence[PackedInstance]) -> list[float]:
        with tempfile.TemporaryDirectory(dir=self.workdir) as tmp:
            req = Path(tmp) / "predict.jsonl"
            resp = Path(tmp) / "scores.jsonl"
            with open(req, "w", encoding="utf-8") as fh:
                for inst in instances:
                    fh.write(json.dumps({"id": inst.pair_id, "text": inst.text}) + "\n")
            self._run(["predict", str(req), str(resp)])
            scores: dict[str, float] = {}
            with open(resp, encoding="utf-8") as fh:
                for line in fh:
                    row = json.loads(line)
                    scores[row["id"]] = float(row["p"])
        if len(scores) != len(instances):
            raise MalformedScores(
                f"{len(scores)} scores for {len(instances)} instances"
            )
        out = []
        for inst in instances:
            if inst.pair_id not in scores:
                raise MalformedScores(f"missing score for {inst.pair_id}")
            p = scores[inst.pair_id]
            if not (0.0 <= p <= 1.0) or math.isnan(p):
                raise MalformedScores(f"score {p} for {inst.pair_id} outside [0,1]")
            out.append(p)
        return out
