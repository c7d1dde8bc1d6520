import json
from pathlib import Path

import pytest

from explicat import corpus as cio
from explicat.taggers import LexiconTagger

FIXTURES = Path(__file__).parent / "fixtures"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" not in nodeid or getattr(report, "when", "call") != "call":
                continue
            name = nodeid.rsplit("::", 1)[-1]
            criterion = name.removeprefix("test_").replace("_", " ")
            verdict = "PASS" if outcome == "passed" else "FAIL"
            lines.append(f"[acceptance] {criterion}: {verdict}")
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)

# hand-derived oracle: pairs passing the NE + unaligned-content-word filter
EXPECTED_CANDIDATE_INDICES = [1, 3, 7, 8, 11, 12, 15, 17, 19]


@pytest.fixture(scope="session")
def fixture_corpus() -> cio.Corpus:
    return cio.load_parallel(
        FIXTURES / "fixture.src", FIXTURES / "fixture.tgt", "en", "de", cio.Domain.TED
    )


@pytest.fixture(scope="session")
def fixture_alignments(fixture_corpus):
    a = cio.load_alignments(FIXTURES / "fixture.align_a", fixture_corpus, cio.AlignerTool.A)
    b = cio.load_alignments(FIXTURES / "fixture.align_b", fixture_corpus, cio.AlignerTool.B)
    return {i: cio.merge_alignments(a[i], b[i]) for i in a}


@pytest.fixture(scope="session")
def fixture_tagger() -> LexiconTagger:
    data = json.loads((FIXTURES / "tagger.json").read_text(encoding="utf-8"))
    return LexiconTagger(pos_lexicon=data["pos"], ne_lexicon=data["ner"])
