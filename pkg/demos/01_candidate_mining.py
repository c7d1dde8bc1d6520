"""Walkthrough: mining explicitation candidates from a small parallel corpus.

A translator sometimes *adds* material the source never said — converting
"800 lb" to "350 Kilo", glossing "the EPA" as "die amerikanische
Umweltschutzbehörde". Those additions show up as target tokens that no word
aligner can attach to a source token. This demo builds a toy corpus, merges
two aligners' output, and walks the null-alignment filter step by step.

Run:  python3 demos/01_candidate_mining.py
"""

import json
import tempfile
from pathlib import Path

from explicat import corpus as cio
from explicat.extraction import extract_corpus, filter_candidate, null_target_indices
from explicat.taggers import LexiconTagger

# -- 1. a parallel corpus on disk, one sentence per line ---------------------

SRC_LINES = [
    "Merkel spoke today",
    "the EPA estimates this",
    "Carter ran 5 miles yesterday",
    "visit him there",
]
TGT_LINES = [
    "Bundeskanzlerin Merkel sprach heute",                 # role gloss added
    "die amerikanische Umweltschutzbehörde schätzt dies",  # entity expanded
    "Carter lief 5 Meilen ( 8 km ) gestern",               # unit conversion added
    "besuch ihn dort",                                     # nothing added
]
# two aligners disagree slightly; we take the union of their links
ALIGN_A = ["1-1 2-2", "0-0 2-3 3-4", "0-0 1-1 2-2 3-3 4-8", "0-0 1-1 2-2"]
ALIGN_B = ["0-1 1-1 2-2 2-3", "0-0 1-1 2-3 3-4", "0-0 1-1 2-2 3-3", "0-0 1-1 2-2"]

workdir = Path(tempfile.mkdtemp(prefix="mining-demo-"))
for name, lines in [
    ("corpus.en", SRC_LINES), ("corpus.de", TGT_LINES),
    ("aligner_a.txt", ALIGN_A), ("aligner_b.txt", ALIGN_B),
]:
    (workdir / name).write_text("\n".join(lines) + "\n", encoding="utf-8")

corpus = cio.load_parallel(
    workdir / "corpus.en", workdir / "corpus.de", "en", "de", cio.Domain.TED
)
print(f"loaded {len(corpus.pairs)} sentence pairs, ids like {corpus.pairs[0].id}")

# -- 2. alignments: parse both aligners, merge by union ----------------------

a = cio.load_alignments(workdir / "aligner_a.txt", corpus, cio.AlignerTool.A)
b = cio.load_alignments(workdir / "aligner_b.txt", corpus, cio.AlignerTool.B)
merged = {pid: cio.merge_alignments(a[pid], b[pid]) for pid in a}

pair = corpus.pairs[0]
print(f"\npair 0 target: {pair.tgt_tokens}")
print(f"  aligner A links : {sorted(a[pair.id].links)}")
print(f"  aligner B links : {sorted(b[pair.id].links)}")
print(f"  union           : {sorted(merged[pair.id].links)}")
print(f"  unaligned target: {null_target_indices(pair, merged[pair.id])}"
      f"  -> {[pair.tgt_tokens[j] for j in null_target_indices(pair, merged[pair.id])]}")

# -- 3. the candidate filter -------------------------------------------------
# A pair survives only if (a) a named entity with an allowed label occurs on
# either side, and (b) at least one unaligned target token is a content word
# (NOUN / PRON / PROPN). Both constraints need a tagger.

tagger = LexiconTagger(
    pos_lexicon={
        "bundeskanzlerin": "NOUN", "umweltschutzbehörde": "NOUN",
        "amerikanische": "ADJ", "die": "DET", "km": "NOUN", "(": "PUNCT",
        ")": "PUNCT", "8": "NUM",
    },
    ne_lexicon={"Merkel": "PERSON", "EPA": "ORG", "Carter": "PERSON"},
)

print("\nper-pair filter verdicts:")
for pair in corpus.pairs:
    cand = filter_candidate(pair, merged[pair.id], tagger)
    verdict = "CANDIDATE" if cand else "rejected "
    detail = ""
    if cand:
        spans = [(s.start, s.end, " ".join(s.tokens)) for s in cand.spans]
        detail = f" addition spans={spans}"
    print(f"  {pair.id} {verdict}{detail}")

# -- 4. the whole corpus in one call ----------------------------------------

candidates, stats = extract_corpus(corpus, merged, tagger)
print(f"\nextract_corpus: {stats.n_candidates}/{stats.n_pairs} pairs "
      f"({stats.rate:.0%}) kept")
print("candidate records as written by the CLI (JSONL):")
for cand in candidates:
    print("  " + json.dumps({
        "id": cand.pair_id,
        "spans": [[s.start, s.end] for s in cand.spans],
        "content_hits": list(cand.content_hits),
    }))
