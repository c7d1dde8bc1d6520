"""Synthetic bitext generator for unattended end-to-end runs and benchmarks.

Targets are copies of the source (aligned i-i) into which additions may be
inserted unaligned. A hidden rule defines positives: the addition is a
parenthesized (or bracketed) segment containing a measurement unit with a
converted number, or a named-entity gloss. Distractor additions and in-text
unit mentions keep the classes from being separable by any single feature,
and a small label-noise rate keeps the ceiling below 1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .corpus import AlignerTool, AlignmentSet, Corpus, Domain, SentencePair
from .engine import Instance, InstanceStore
from .models import HashingEmbedder, featurize, pack
from .schema import (
    ALLabel,
    AnnotatedRecord,
    DatasetTag,
    RecordSpan,
    StyleTag,
    TypeTag,
)
from .taggers import LexiconTagger

_SYLLABLES = [
    "ba", "do", "fen", "gri", "hul", "ka", "lor", "mek", "nu", "pol",
    "ras", "sti", "tor", "vel", "wib", "zan", "che", "dri", "fos", "gul",
]

_UNITS = ["km", "kg", "m", "degrees", "pounds", "miles"]

_NE_LABELS = ["PERSON", "ORG", "GPE", "LOC", "EVENT"]


def _word(rng: random.Random, n_syll: int = 2) -> str:
    return "".join(rng.choice(_SYLLABLES) for _ in range(n_syll))


@dataclass
class SynthConfig:
    n_pairs: int = 5000
    p_positive: float = 0.03
    p_distractor_addition: float = 0.12
    p_inline_unit: float = 0.15
    p_ne_in_source: float = 0.45
    # directional annotation-noise rates; negatives flip rarely so the overall
    # positive rate stays near p_positive
    noise_pos_to_neg: float = 0.05
    noise_neg_to_pos: float = 0.002
    vocab_size: int = 300
    n_entities: int = 60
    embedding_dim: int = 64


@dataclass
class SyntheticDataset:
    corpus: Corpus
    alignments: dict[str, AlignmentSet]
    tagger: LexiconTagger
    labels: dict[str, ALLabel]
    spans: dict[str, list[tuple[int, int]]]
    store: InstanceStore = field(repr=False)

    def annotated_sample(
        self, rng: random.Random, n: int = 400, n_positive: int = 80
    ) -> list[AnnotatedRecord]:
        """Simulated expert-annotated sample, enriched in positives like
        null-alignment extraction output."""
        pos = sorted(i for i, lab in self.labels.items() if lab is ALLabel.TRUE)
        neg = sorted(i for i, lab in self.labels.items() if lab is ALLabel.FALSE)
        n_pos = min(n_positive, len(pos))
        chosen = rng.sample(pos, n_pos) + rng.sample(neg, n - n_pos)
        records = []
        for pid in sorted(chosen):
            records.append(self.record_for(pid))
        return records

    def record_for(self, pair_id: str) -> AnnotatedRecord:
        label = self.labels[pair_id]
        inst = self.store[pair_id]
        if label is ALLabel.TRUE:
            raw = self.spans.get(pair_id) or [(0, 1)]
            spans = tuple(RecordSpan(s, e) for s, e in raw)
            return AnnotatedRecord(
                id=pair_id,
                source=inst.source,
                target=inst.target,
                spans=spans,
                types=(TypeTag.ADD_INF,),
                styles=tuple(StyleTag.A for _ in spans),
                dataset=DatasetTag.EXTR,
                al_label=label,
            )
        return AnnotatedRecord(
            id=pair_id,
            source=inst.source,
            target=inst.target,
            spans=(),
            types=(),
            styles=(),
            dataset=DatasetTag.EXTR,
            al_label=label,
        )


def generate(seed: int, config: SynthConfig | None = None) -> SyntheticDataset:
    cfg = config or SynthConfig()
    rng = random.Random(seed)

    vocab = sorted({_word(rng) for _ in range(cfg.vocab_size)})
    entities = sorted({_word(rng, 3).capitalize() for _ in range(cfg.n_entities)})
    pos_lexicon = {}
    for w in vocab:
        roll = rng.random()
        if roll < 0.45:
            pos_lexicon[w] = "NOUN"
        elif roll < 0.65:
            pos_lexicon[w] = "VERB"
        elif roll < 0.8:
            pos_lexicon[w] = "ADJ"
        else:
            pos_lexicon[w] = "ADV"
    for u in _UNITS:
        pos_lexicon[u] = "NOUN"
    ne_lexicon = {e: rng.choice(_NE_LABELS) for e in entities}
    tagger = LexiconTagger(pos_lexicon=pos_lexicon, ne_lexicon=ne_lexicon)

    pairs: list[SentencePair] = []
    alignments: dict[str, AlignmentSet] = {}
    labels: dict[str, ALLabel] = {}
    spans: dict[str, list[tuple[int, int]]] = {}

    n_positive = round(cfg.n_pairs * cfg.p_positive)
    positive_ids = set(rng.sample(range(cfg.n_pairs), n_positive))

    for idx in range(cfg.n_pairs):
        pid = f"synth-en2de-{idx:06d}"
        src = [rng.choice(vocab) for _ in range(rng.randint(8, 16))]
        if rng.random() < cfg.p_ne_in_source:
            src.insert(rng.randrange(len(src) + 1), rng.choice(entities))
        if rng.random() < 0.3:
            src.insert(rng.randrange(len(src) + 1), str(rng.randint(2, 900)))
        if rng.random() < cfg.p_inline_unit:
            at = rng.randrange(len(src) + 1)
            src.insert(at, rng.choice(_UNITS))
            src.insert(at, str(rng.randint(2, 900)))

        tgt = list(src)
        links = {(i, i) for i in range(len(src))}
        label = ALLabel.FALSE
        pair_spans: list[tuple[int, int]] = []

        def insert_addition(tokens: list[str]) -> tuple[int, int]:
            at = rng.randrange(len(tgt) + 1)
            # shift links right of the insertion point
            nonlocal links
            links = {
                (i, j if j < at else j + len(tokens)) for i, j in links
            }
            tgt[at:at] = tokens
            return at, at + len(tokens)

        if idx in positive_ids:
            wrap = ("(", ")") if rng.random() < 0.7 else ("[", "]")
            if rng.random() < 0.55:
                body = [str(rng.randint(2, 900)), rng.choice(_UNITS)]
            else:
                body = [rng.choice(entities), rng.choice(vocab)]
            pair_spans.append(insert_addition([wrap[0], *body, wrap[1]]))
            label = ALLabel.TRUE
        elif rng.random() < cfg.p_distractor_addition:
            body = [rng.choice(vocab) for _ in range(rng.randint(1, 3))]
            wrap = ("(", ")") if rng.random() < 0.7 else ("[", "]")
            insert_addition([wrap[0], *body, wrap[1]])

        if label is ALLabel.TRUE:
            if rng.random() < cfg.noise_pos_to_neg:
                label = ALLabel.FALSE
        elif rng.random() < cfg.noise_neg_to_pos:
            label = ALLabel.TRUE
            if not pair_spans:
                pair_spans.append((0, 1))

        pair = SentencePair(
            id=pid,
            src_lang="en",
            tgt_lang="de",
            src_text=" ".join(src),
            tgt_text=" ".join(tgt),
            src_tokens=tuple(src),
            tgt_tokens=tuple(tgt),
            domain=Domain.SYNTH,
        )
        pairs.append(pair)
        alignments[pid] = AlignmentSet(
            pair_id=pid, links=frozenset(links), source_tool=AlignerTool.MERGED
        )
        labels[pid] = label
        if pair_spans:
            spans[pid] = pair_spans

    embedder = HashingEmbedder(dim=cfg.embedding_dim)
    instances = []
    for pair in pairs:
        feats = featurize(pair, alignments[pair.id], tagger)
        emb = embedder.embed(pack(pair))
        instances.append(
            Instance(
                id=pair.id,
                source=pair.src_text,
                target=pair.tgt_text,
                features=feats,
                embedding=tuple(float(x) for x in emb),
            )
        )

    return SyntheticDataset(
        corpus=Corpus(pairs=pairs, alignments=alignments),
        alignments=alignments,
        tagger=tagger,
        labels=labels,
        spans=spans,
        store=InstanceStore(instances),
    )
