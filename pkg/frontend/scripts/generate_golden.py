"""Regenerate test/fixtures/golden.json from the backend's own rules.

The frontend's client-side validator and bracket preview must agree with the
annotation service. This script feeds 200 fuzzed submissions through the
exact server path (submission -> record -> validate) and records the
verdicts, plus bracket renderings for a set of span layouts, so the
TypeScript tests can assert byte-for-byte agreement without a live server.

Run from the repository root:  python3 frontend/scripts/generate_golden.py
"""

import json
import random
from pathlib import Path

from explicat.engine import AnnotationTask
from explicat.errors import ValidationFailure
from explicat.schema import (
    ALLabel,
    AnnotatedRecord,
    DatasetTag,
    RecordSpan,
    StyleTag,
    TypeTag,
    render_brackets,
    validate,
)
from explicat.service import SpanModel, SubmissionModel, _submission_to_record

OUT = Path(__file__).resolve().parent.parent / "test" / "fixtures" / "golden.json"

WORDS = "alpha beta gamma delta epsilon zeta eta theta".split()
GOOD_TYPES = [t.value for t in TypeTag]
GOOD_STYLES = [s.value for s in StyleTag]


def fuzz_case(rng: random.Random):
    n = rng.randint(1, 12)
    target = " ".join(rng.choice(WORDS) for _ in range(n))
    label = rng.choice(["TRUE", "FALSE", "DISCARD", "MAYBE"] if rng.random() < 0.1
                       else ["TRUE", "TRUE", "FALSE", "DISCARD"])
    spans = []
    n_spans = rng.choice([0, 0, 1, 1, 1, 2, 3])
    for _ in range(n_spans):
        if rng.random() < 0.15:
            s = rng.randint(-2, n + 2)
            e = s + rng.randint(-1, 3)  # may be empty, inverted, out of bounds
        else:
            s = rng.randrange(n)
            e = rng.randint(s + 1, n)
        spans.append({"tgt_start": s, "tgt_end": e})
    n_types = rng.choice([0, 1, 1, 2])
    types = [
        rng.choice(GOOD_TYPES + ["BOGUS-TAG"] * 2) if rng.random() < 0.15
        else rng.choice(GOOD_TYPES)
        for _ in range(n_types)
    ]
    n_styles = rng.choice([len(spans), len(spans), rng.randint(0, 3)])
    styles = [
        "Q" if rng.random() < 0.08 else rng.choice(GOOD_STYLES)
        for _ in range(n_styles)
    ]
    return {
        "task": {"target": target, "nTokens": n},
        "submission": {
            "task_id": f"fuzz-{rng.randrange(10**6):06d}",
            "al_label": label,
            "spans": spans,
            "types": types,
            "styles": styles,
        },
    }


def server_verdict(case):
    sub = SubmissionModel(
        task_id=case["submission"]["task_id"],
        al_label=case["submission"]["al_label"],
        spans=[SpanModel(**s) for s in case["submission"]["spans"]],
        types=case["submission"]["types"],
        styles=case["submission"]["styles"],
    )
    task = AnnotationTask(
        record_id=sub.task_id, source="src text", target=case["task"]["target"],
        spans=(), provenance="random", round_index=1,
    )
    try:
        record = _submission_to_record(sub, task)
    except ValidationFailure as exc:
        return {"accepted": False, "violations": exc.violations}
    violations = validate(record)
    return {"accepted": not violations, "violations": violations}


def bracket_cases():
    layouts = [
        ("1 mile ( 1.6km )", [(3, 4)]),
        ("a b c d e f", [(1, 3), (5, 6)]),
        ("a b c d", [(0, 4)]),
        ("solo", [(0, 1)]),
        ("x y z", []),
        ("t0 t1 t2 t3 t4", [(0, 2), (2, 4)]),  # adjacent spans
    ]
    out = []
    for target, spans in layouts:
        rec = AnnotatedRecord(
            id="golden", source="s", target=target,
            spans=tuple(RecordSpan(s, e) for s, e in spans),
            types=(TypeTag.OTHER,) if spans else (),
            styles=tuple(StyleTag.A for _ in spans),
            dataset=DatasetTag.POOL,
            al_label=ALLabel.TRUE if spans else ALLabel.FALSE,
        )
        _, tgt = render_brackets(rec)
        out.append({"target": target, "spans": [list(s) for s in spans], "rendered": tgt})
    return out


def main() -> None:
    rng = random.Random(2024)
    cases = []
    for _ in range(200):
        case = fuzz_case(rng)
        case["server"] = server_verdict(case)
        cases.append(case)
    n_ok = sum(1 for c in cases if c["server"]["accepted"])
    payload = {"fuzz": cases, "brackets": bracket_cases()}
    OUT.write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {OUT} ({n_ok}/200 accepted by the server)")


if __name__ == "__main__":
    main()
