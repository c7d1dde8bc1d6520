"""Tagger adapter contract plus a lexicon-backed tagger for tests and fixtures.

Production pipelines (spaCy etc.) plug in behind the same protocol; the core
only consumes Universal POS tags and NE label spans over its own token
indices. Compound splitting is an adapter concern.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, Sequence, runtime_checkable

from .errors import TaggerFailure

ALLOWED_NE_LABELS = frozenset(
    {
        "PERSON", "NORP", "FAC", "ORG", "GPE", "LOC",
        "PRODUCT", "EVENT", "WORK_OF_ART", "LAW", "LANGUAGE",
    }
)

CONTENT_POS = frozenset({"NOUN", "PRON", "PROPN"})


@runtime_checkable
class Tagger(Protocol):
    def pos(self, tokens: Sequence[str], lang: str) -> list[str]:
        """One Universal POS tag per input token."""
        ...

    def ner(self, tokens: Sequence[str], lang: str) -> list[tuple[str, int, int]]:
        """(label, start, end) entity spans over the input tokens, end exclusive."""
        ...


@dataclass
class LexiconTagger:
    """Deterministic tagger driven by word lists; single-token entities only.

    pos_lexicon maps lowercased word -> POS; unknown words fall back to "X"
    (digit-only tokens to "NUM", punctuation to "PUNCT"). ne_lexicon maps the
    exact surface form -> NE label.
    """

    pos_lexicon: dict[str, str] = field(default_factory=dict)
    ne_lexicon: dict[str, str] = field(default_factory=dict)

    def pos(self, tokens: Sequence[str], lang: str) -> list[str]:
        tags = []
        for tok in tokens:
            low = tok.lower()
            if low in self.pos_lexicon:
                tags.append(self.pos_lexicon[low])
            elif tok in self.ne_lexicon:
                tags.append("PROPN")
            elif any(ch.isdigit() for ch in tok):
                tags.append("NUM")
            elif not any(ch.isalnum() for ch in tok):
                tags.append("PUNCT")
            else:
                tags.append("X")
        return tags

    def ner(self, tokens: Sequence[str], lang: str) -> list[tuple[str, int, int]]:
        hits = []
        for i, tok in enumerate(tokens):
            label = self.ne_lexicon.get(tok)
            if label is not None:
                hits.append((label, i, i + 1))
        return hits


@dataclass
class CheckedTagger:
    """Wrapper that validates adapter output shape before it reaches the core."""

    inner: Tagger

    def pos(self, tokens: Sequence[str], lang: str) -> list[str]:
        tags = self.inner.pos(tokens, lang)
        if len(tags) != len(tokens):
            raise TaggerFailure(
                f"pos returned {len(tags)} tags for {len(tokens)} tokens"
            )
        return tags

    def ner(self, tokens: Sequence[str], lang: str) -> list[tuple[str, int, int]]:
        hits = self.inner.ner(tokens, lang)
        for label, start, end in hits:
            if not (0 <= start < end <= len(tokens)):
                raise TaggerFailure(f"ner span [{start},{end}) out of bounds")
        return hits
