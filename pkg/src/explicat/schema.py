"""Annotation schema: labels, type/style tags, record structure, rendering and stats.

Serialized tag names use hyphens (e.g. "ENT-DESC"); Python enum members use
underscores. A record may carry several type tags; styles align one-to-one
with spans.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
import json
import re

from .errors import NestedBrackets, OverlappingSpans, SchemaViolation, UnbalancedBrackets


class ALLabel(Enum):
    TRUE = "TRUE"          # background or cultural enrichment
    FALSE = "FALSE"        # direct/figurative translation, no enrichment
    DISCARD = "DISCARD"    # mistranslation or non-aligned translation


class Category(Enum):
    ENT = "ENT"
    LING = "LING"
    SYS = "SYS"
    ADD = "ADD"


class TypeTag(Enum):
    # entities
    ENT_REP = "ENT-REP"
    ENT_DESC = "ENT-DESC"
    ENT_SPEC = "ENT-SPEC"
    ENT_HYP = "ENT-HYP"
    ENT_ACR = "ENT-ACR"
    # linguistic adjustments
    TRANS = "TRANS"
    LING_EXPL = "LING-EXPL"
    ACR = "ACR"
    HYPER = "HYPER"
    HYPO_SPEC = "HYPO-SPEC"
    # system transfers
    MEAS_CONV = "MEAS-CONV"
    MEAS_DIM = "MEAS-DIM"
    MEAS_SPEC = "MEAS-SPEC"
    SYS_CONV = "SYS-CONV"
    SYS_DESC = "SYS-DESC"
    # added information (OTHER is kept here for statistics)
    ADD_INF = "ADD-INF"
    CLEAR = "CLEAR"
    DEIX = "DEIX"
    OTHER = "OTHER"

    @property
    def category(self) -> Category:
        return _TAG_CATEGORY[self]


_TAG_CATEGORY = {
    TypeTag.ENT_REP: Category.ENT,
    TypeTag.ENT_DESC: Category.ENT,
    TypeTag.ENT_SPEC: Category.ENT,
    TypeTag.ENT_HYP: Category.ENT,
    TypeTag.ENT_ACR: Category.ENT,
    TypeTag.TRANS: Category.LING,
    TypeTag.LING_EXPL: Category.LING,
    TypeTag.ACR: Category.LING,
    TypeTag.HYPER: Category.LING,
    TypeTag.HYPO_SPEC: Category.LING,
    TypeTag.MEAS_CONV: Category.SYS,
    TypeTag.MEAS_DIM: Category.SYS,
    TypeTag.MEAS_SPEC: Category.SYS,
    TypeTag.SYS_CONV: Category.SYS,
    TypeTag.SYS_DESC: Category.SYS,
    TypeTag.ADD_INF: Category.ADD,
    TypeTag.CLEAR: Category.ADD,
    TypeTag.DEIX: Category.ADD,
    TypeTag.OTHER: Category.ADD,
}


class StyleTag(Enum):
    R = "R"  # replaces source material
    A = "A"  # adds to the source material


class DatasetTag(Enum):
    EXTR = "EXTR"    # null-alignment extraction
    POOL = "POOL"    # detected by the final classifier over the pool
    TRAIN = "TRAIN"  # annotated during active learning


@dataclass(frozen=True)
class RecordSpan:
    """Token span over the target text, with an optional source-side span."""

    tgt_start: int
    tgt_end: int  # exclusive
    src_start: int | None = None
    src_end: int | None = None


@dataclass(frozen=True)
class AnnotatedRecord:
    """One corpus unit: sentence pair, explicitation spans and tags, AL label."""

    id: str
    source: str
    target: str
    spans: tuple[RecordSpan, ...]
    types: tuple[TypeTag, ...]
    styles: tuple[StyleTag, ...]
    dataset: DatasetTag
    al_label: ALLabel

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "source": self.source,
            "target": self.target,
            "spans": [
                {
                    "tgt_start": s.tgt_start,
                    "tgt_end": s.tgt_end,
                    "src_start": s.src_start,
                    "src_end": s.src_end,
                }
                for s in self.spans
            ],
            "types": [t.value for t in self.types],
            "styles": [s.value for s in self.styles],
            "dataset": self.dataset.value,
            "al_label": self.al_label.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AnnotatedRecord":
        try:
            return cls(
                id=d["id"],
                source=d["source"],
                target=d["target"],
                spans=tuple(
                    RecordSpan(
                        tgt_start=s["tgt_start"],
                        tgt_end=s["tgt_end"],
                        src_start=s.get("src_start"),
                        src_end=s.get("src_end"),
                    )
                    for s in d["spans"]
                ),
                types=tuple(TypeTag(t) for t in d["types"]),
                styles=tuple(StyleTag(s) for s in d["styles"]),
                dataset=DatasetTag(d["dataset"]),
                al_label=ALLabel(d["al_label"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaViolation(f"malformed record: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True)


def validate(record: AnnotatedRecord) -> list[str]:
    """Return the list of violated invariants (empty list means the record is valid)."""
    violations: list[str] = []
    if not record.id:
        violations.append("id: empty")
    n_tgt = len(record.target.split())
    if record.al_label is ALLabel.TRUE:
        if len(record.spans) < 1:
            violations.append("spans: empty on TRUE record")
        if len(record.types) < 1:
            violations.append("types: empty on TRUE record")
        if len(record.styles) != len(record.spans):
            violations.append(
                f"styles: {len(record.styles)} styles for {len(record.spans)} spans"
            )
    else:
        if record.spans:
            violations.append(f"spans: nonempty on {record.al_label.value} record")
        if record.types:
            violations.append(f"types: nonempty on {record.al_label.value} record")
        if record.styles:
            violations.append(f"styles: nonempty on {record.al_label.value} record")

    prev_end = None
    for i, span in enumerate(sorted(record.spans, key=lambda s: s.tgt_start)):
        if not (0 <= span.tgt_start < span.tgt_end <= n_tgt):
            violations.append(f"spans[{i}]: out of bounds [{span.tgt_start},{span.tgt_end}) for {n_tgt} tokens")
        if prev_end is not None and span.tgt_start < prev_end:
            violations.append(f"spans[{i}]: overlaps previous span")
        prev_end = span.tgt_end
    return violations


def render_brackets(record: AnnotatedRecord) -> tuple[str, str]:
    """Render bracket markup: span tokens wrapped as "[ ... ]" with space padding."""
    src = _render_side(record.source, [
        (s.src_start, s.src_end) for s in record.spans if s.src_start is not None
    ])
    tgt = _render_side(record.target, [(s.tgt_start, s.tgt_end) for s in record.spans])
    return src, tgt


def _render_side(text: str, spans: list[tuple[int, int]]) -> str:
    tokens = text.split()
    spans = sorted(spans)
    prev_end = 0
    for start, end in spans:
        if start < prev_end:
            raise OverlappingSpans(f"spans overlap at token {start}")
        prev_end = end
    out: list[str] = []
    starts = {s for s, _ in spans}
    ends = {e for _, e in spans}
    for i, tok in enumerate(tokens):
        if i in starts:
            out.append("[")
        out.append(tok)
        if i + 1 in ends:
            out.append("]")
    return " ".join(out)


def parse_brackets(source: str, target: str, meta: dict) -> AnnotatedRecord:
    """Inverse of render_brackets: recover plain texts and span indices from markup.

    meta supplies id/types/styles/dataset/al_label (same keys as the JSON form).
    """
    src_text, src_spans = _parse_side(source)
    tgt_text, tgt_spans = _parse_side(target)
    spans = []
    for i, (ts, te) in enumerate(tgt_spans):
        if i < len(src_spans):
            spans.append(RecordSpan(ts, te, src_spans[i][0], src_spans[i][1]))
        else:
            spans.append(RecordSpan(ts, te))
    return AnnotatedRecord(
        id=meta["id"],
        source=src_text,
        target=tgt_text,
        spans=tuple(spans),
        types=tuple(TypeTag(t) for t in meta.get("types", [])),
        styles=tuple(StyleTag(s) for s in meta.get("styles", [])),
        dataset=DatasetTag(meta["dataset"]),
        al_label=ALLabel(meta["al_label"]),
    )


def _parse_side(marked: str) -> tuple[str, list[tuple[int, int]]]:
    tokens: list[str] = []
    spans: list[tuple[int, int]] = []
    open_at: int | None = None
    for tok in marked.split():
        if tok == "[":
            if open_at is not None:
                raise NestedBrackets(f"nested '[' in {marked!r}")
            open_at = len(tokens)
        elif tok == "]":
            if open_at is None:
                raise UnbalancedBrackets(f"']' without '[' in {marked!r}")
            if open_at == len(tokens):
                raise UnbalancedBrackets(f"empty bracket pair in {marked!r}")
            spans.append((open_at, len(tokens)))
            open_at = None
        else:
            tokens.append(tok)
    if open_at is not None:
        raise UnbalancedBrackets(f"unclosed '[' in {marked!r}")
    return " ".join(tokens), spans


_ID_RE = re.compile(r"^(?P<domain>[a-z]+)-(?P<src>[a-z]{2})2(?P<tgt>[a-z]{2})-")


@dataclass
class StatsRow:
    """Pair counts per dataset and tag totals per category for one corpus slice."""

    pool: int = 0
    extr: int = 0
    train: int = 0
    ent: int = 0
    sys: int = 0
    ling: int = 0
    add: int = 0

    def as_dict(self) -> dict:
        return {
            "POOL": self.pool, "EXTR": self.extr, "TRAIN": self.train,
            "ENT": self.ent, "SYS": self.sys, "LING": self.ling, "ADD": self.add,
        }


def corpus_stats(records) -> dict[str, StatsRow]:
    """Aggregate counts per (domain, language-pair) slice, keyed like "TED-DE".

    A record with k type tags contributes k to the tag-category totals.
    """
    table: dict[str, StatsRow] = defaultdict(StatsRow)
    for rec in records:
        m = _ID_RE.match(rec.id)
        if m:
            key = f"{m.group('domain').upper()}-{m.group('tgt').upper()}"
        else:
            key = "UNKNOWN"
        row = table[key]
        if rec.dataset is DatasetTag.POOL:
            row.pool += 1
        elif rec.dataset is DatasetTag.EXTR:
            row.extr += 1
        else:
            row.train += 1
        for tag in rec.types:
            cat = tag.category
            if cat is Category.ENT:
                row.ent += 1
            elif cat is Category.SYS:
                row.sys += 1
            elif cat is Category.LING:
                row.ling += 1
            else:
                row.add += 1
    return dict(table)
