"""Parallel-corpus loading, deterministic tokenization, Pharaoh alignments, record IO.

Bitext is one sentence per line in two parallel files (Europarl/TED style).
Alignments are Pharaoh "srcIdx-tgtIdx" tokens, one line per sentence pair,
in corpus order. All files are UTF-8 with LF line endings.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable

from .errors import (
    EmptyFile,
    IndexOutOfBounds,
    LineCountMismatch,
    MalformedLink,
    PairMismatch,
    SchemaViolation,
)
from .schema import AnnotatedRecord


class Domain(Enum):
    TED = "TED"
    EUR = "EUR"
    SYNTH = "SYNTH"


class AlignerTool(Enum):
    A = "A"
    B = "B"
    MERGED = "MERGED"


@dataclass(frozen=True)
class SentencePair:
    id: str
    src_lang: str
    tgt_lang: str
    src_text: str
    tgt_text: str
    src_tokens: tuple[str, ...]
    tgt_tokens: tuple[str, ...]
    domain: Domain


@dataclass(frozen=True)
class AlignmentSet:
    """Token-level links for one sentence pair, oriented source -> target."""

    pair_id: str
    links: frozenset[tuple[int, int]]
    source_tool: AlignerTool


@dataclass
class Corpus:
    pairs: list[SentencePair]
    alignments: dict[str, AlignmentSet]

    def __len__(self) -> int:
        return len(self.pairs)

    def pair(self, pair_id: str) -> SentencePair:
        return self._index()[pair_id]

    def _index(self) -> dict[str, SentencePair]:
        if not hasattr(self, "_by_id"):
            self._by_id = {p.id: p for p in self.pairs}
        return self._by_id


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str, lang: str | None = None) -> list[str]:
    """Split on whitespace, then detach leading/trailing punctuation as own tokens.

    Pure and deterministic; empty text yields an empty list.
    """
    tokens: list[str] = []
    for chunk in text.split():
        lead: list[str] = []
        trail: list[str] = []
        while len(chunk) > 1 and _is_punct(chunk[0]):
            lead.append(chunk[0])
            chunk = chunk[1:]
        while len(chunk) > 1 and _is_punct(chunk[-1]):
            trail.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(lead)
        tokens.append(chunk)
        tokens.extend(reversed(trail))
    return tokens


def load_parallel(
    src_path: str | Path,
    tgt_path: str | Path,
    src_lang: str,
    tgt_lang: str,
    domain: Domain,
) -> Corpus:
    """Build a corpus from two line-aligned files; ids are sequential and deterministic."""
    src_lines = Path(src_path).read_text(encoding="utf-8").splitlines()
    tgt_lines = Path(tgt_path).read_text(encoding="utf-8").splitlines()
    if not src_lines or not tgt_lines:
        raise EmptyFile(f"empty input: {src_path if not src_lines else tgt_path}")
    if len(src_lines) != len(tgt_lines):
        raise LineCountMismatch(
            f"{src_path}: {len(src_lines)} lines vs {tgt_path}: {len(tgt_lines)} lines"
        )
    prefix = f"{domain.value.lower()}-{src_lang}2{tgt_lang}-"
    pairs = []
    for i, (src, tgt) in enumerate(zip(src_lines, tgt_lines)):
        pairs.append(
            SentencePair(
                id=f"{prefix}{i:06d}",
                src_lang=src_lang,
                tgt_lang=tgt_lang,
                src_text=src,
                tgt_text=tgt,
                src_tokens=tuple(tokenize(src, src_lang)),
                tgt_tokens=tuple(tokenize(tgt, tgt_lang)),
                domain=domain,
            )
        )
    return Corpus(pairs=pairs, alignments={})


def parse_pharaoh_line(line: str) -> set[tuple[int, int]]:
    links: set[tuple[int, int]] = set()
    for token in line.split():
        parts = token.split("-")
        if len(parts) != 2:
            raise MalformedLink(f"bad link token {token!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise MalformedLink(f"bad link token {token!r}") from exc
        if i < 0 or j < 0:
            raise MalformedLink(f"negative index in {token!r}")
        links.add((i, j))
    return links


def load_alignments(
    path: str | Path, corpus: Corpus, tool_tag: AlignerTool
) -> dict[str, AlignmentSet]:
    """Parse a Pharaoh alignment file in corpus order; out-of-bounds links are errors."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if len(lines) != len(corpus.pairs):
        raise LineCountMismatch(
            f"{path}: {len(lines)} lines for corpus of {len(corpus.pairs)} pairs"
        )
    out: dict[str, AlignmentSet] = {}
    for pair, line in zip(corpus.pairs, lines):
        links = parse_pharaoh_line(line)
        for i, j in links:
            if i >= len(pair.src_tokens) or j >= len(pair.tgt_tokens):
                raise IndexOutOfBounds(
                    f"pair {pair.id}: link {i}-{j} outside "
                    f"{len(pair.src_tokens)}x{len(pair.tgt_tokens)} tokens"
                )
        out[pair.id] = AlignmentSet(
            pair_id=pair.id, links=frozenset(links), source_tool=tool_tag
        )
    return out


def merge_alignments(a: AlignmentSet, b: AlignmentSet) -> AlignmentSet:
    """Union of two aligners' links for the same pair (tool tag becomes MERGED)."""
    if a.pair_id != b.pair_id:
        raise PairMismatch(f"{a.pair_id} vs {b.pair_id}")
    return AlignmentSet(
        pair_id=a.pair_id,
        links=a.links | b.links,
        source_tool=AlignerTool.MERGED,
    )


def write_records(records: Iterable[AnnotatedRecord], path: str | Path) -> None:
    """Write records as JSON lines (UTF-8, LF, byte-stable across writes)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(rec.to_json())
            fh.write("\n")


def read_records(path: str | Path) -> list[AnnotatedRecord]:
    records: list[AnnotatedRecord] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(AnnotatedRecord.from_dict(json.loads(line)))
            except (json.JSONDecodeError, SchemaViolation) as exc:
                raise SchemaViolation(f"{path}:{lineno}: {exc}") from exc
    return records
