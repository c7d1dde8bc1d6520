"""Null-alignment mining: unaligned target tokens, addition spans, NE/POS filtering.

A sentence pair becomes a candidate when it carries a named entity with an
allowed label (either side) and at least one unaligned content word
(NOUN/PRON/PROPN) in the target.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .corpus import AlignmentSet, Corpus, SentencePair
from .errors import MissingAlignment, TaggerFailure
from .taggers import ALLOWED_NE_LABELS, CONTENT_POS, Tagger


class Side(Enum):
    SRC = "SRC"
    TGT = "TGT"


@dataclass(frozen=True)
class AdditionSpan:
    """Maximal run of unaligned target tokens, end exclusive."""

    start: int
    end: int
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class NEHit:
    side: Side
    label: str
    start: int
    end: int


@dataclass(frozen=True)
class Candidate:
    pair_id: str
    spans: tuple[AdditionSpan, ...]
    ne_hits: tuple[NEHit, ...]
    content_hits: tuple[int, ...]  # unaligned target indices with content POS


@dataclass
class ExtractionStats:
    n_pairs: int
    n_candidates: int

    @property
    def rate(self) -> float:
        return self.n_candidates / self.n_pairs if self.n_pairs else 0.0


def null_target_indices(pair: SentencePair, alignment: AlignmentSet) -> list[int]:
    """Target indices that appear in no alignment link, ascending."""
    aligned = {j for _, j in alignment.links}
    return [j for j in range(len(pair.tgt_tokens)) if j not in aligned]


def addition_spans(indices: list[int], pair: SentencePair) -> list[AdditionSpan]:
    """Group sorted indices into maximal consecutive runs."""
    spans: list[AdditionSpan] = []
    run_start: int | None = None
    prev = None
    for idx in indices:
        if run_start is None:
            run_start = idx
        elif idx != prev + 1:
            spans.append(_make_span(run_start, prev + 1, pair))
            run_start = idx
        prev = idx
    if run_start is not None:
        spans.append(_make_span(run_start, prev + 1, pair))
    return spans


def _make_span(start: int, end: int, pair: SentencePair) -> AdditionSpan:
    return AdditionSpan(start=start, end=end, tokens=pair.tgt_tokens[start:end])


def _is_content_token(token: str) -> bool:
    # punctuation-only additions never count as content words
    return any(ch.isalnum() for ch in token)


def filter_candidate(
    pair: SentencePair, alignment: AlignmentSet, tagger: Tagger
) -> Candidate | None:
    """Apply the NE and unaligned-content-word constraints to one pair."""
    nulls = null_target_indices(pair, alignment)
    if not nulls:
        return None
    try:
        tgt_pos = tagger.pos(pair.tgt_tokens, pair.tgt_lang)
        src_ner = tagger.ner(pair.src_tokens, pair.src_lang)
        tgt_ner = tagger.ner(pair.tgt_tokens, pair.tgt_lang)
    except TaggerFailure:
        raise
    except Exception as exc:
        raise TaggerFailure(f"pair {pair.id}: {exc}") from exc

    content_hits = tuple(
        j
        for j in nulls
        if tgt_pos[j] in CONTENT_POS and _is_content_token(pair.tgt_tokens[j])
    )
    if not content_hits:
        return None

    ne_hits = tuple(
        NEHit(side, label, start, end)
        for side, hits in ((Side.SRC, src_ner), (Side.TGT, tgt_ner))
        for label, start, end in hits
        if label in ALLOWED_NE_LABELS
    )
    if not ne_hits:
        return None

    return Candidate(
        pair_id=pair.id,
        spans=tuple(addition_spans(nulls, pair)),
        ne_hits=ne_hits,
        content_hits=content_hits,
    )


def extract_corpus(
    corpus: Corpus,
    alignments: dict[str, AlignmentSet],
    tagger: Tagger,
) -> tuple[list[Candidate], ExtractionStats]:
    """Run the candidate filter over a corpus; output is ordered by pair id."""
    missing = [p.id for p in corpus.pairs if p.id not in alignments]
    if missing:
        raise MissingAlignment(f"no alignment for pairs: {missing}")
    candidates = []
    for pair in sorted(corpus.pairs, key=lambda p: p.id):
        cand = filter_candidate(pair, alignments[pair.id], tagger)
        if cand is not None:
            candidates.append(cand)
    return candidates, ExtractionStats(
        n_pairs=len(corpus.pairs), n_candidates=len(candidates)
    )
