"""Command-line interface: extraction, active-learning runs, evaluation, serving."""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import corpus as cio
from . import evalkit, synthetic
from .engine import Engine, EngineConfig, InstanceStore, scripted_sink
from .extraction import extract_corpus
from .schema import ALLabel, corpus_stats
from .taggers import LexiconTagger


def _load_tagger(path: str) -> LexiconTagger:
    """Tagger lexicon file: JSON {"pos": {word: POS}, "ner": {surface: label}}."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return LexiconTagger(pos_lexicon=data.get("pos", {}), ne_lexicon=data.get("ner", {}))


def _load_oracle(path: str):
    labels: dict[str, ALLabel] = {}
    spans: dict[str, list[tuple[int, int]]] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            row = json.loads(line)
            labels[row["id"]] = ALLabel(row["label"])
            if row.get("spans"):
                spans[row["id"]] = [tuple(s) for s in row["spans"]]
    return scripted_sink(labels, spans)


def _engine_from_args(args) -> Engine:
    store = InstanceStore.load(args.store)
    return Engine.load_state(args.state, store, EngineConfig())


def cmd_extract(args) -> int:
    src_lang, tgt_lang = args.langs.split("-")
    corpus = cio.load_parallel(
        args.src, args.tgt, src_lang, tgt_lang, cio.Domain[args.domain]
    )
    align_a = cio.load_alignments(args.align_a, corpus, cio.AlignerTool.A)
    if args.align_b:
        align_b = cio.load_alignments(args.align_b, corpus, cio.AlignerTool.B)
        mode = args.combine
        if mode == "union":
            alignments = {
                i: cio.merge_alignments(align_a[i], align_b[i]) for i in align_a
            }
        else:
            alignments = {
                i: cio.AlignmentSet(
                    pair_id=i,
                    links=align_a[i].links & align_b[i].links,
                    source_tool=cio.AlignerTool.MERGED,
                )
                for i in align_a
            }
    else:
        alignments = align_a
    tagger = _load_tagger(args.tagger)
    candidates, stats = extract_corpus(corpus, alignments, tagger)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        for cand in candidates:
            fh.write(
                json.dumps(
                    {
                        "id": cand.pair_id,
                        "dataset": "EXTR",
                        "spans": [[s.start, s.end] for s in cand.spans],
                        "ne_hits": [
                            [h.side.value, h.label, h.start, h.end] for h in cand.ne_hits
                        ],
                        "content_hits": list(cand.content_hits),
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    print(
        json.dumps(
            {"n_pairs": stats.n_pairs, "n_candidates": stats.n_candidates, "rate": stats.rate}
        ),
        file=sys.stderr,
    )
    return 0


def cmd_synth(args) -> int:
    ds = synthetic.generate(args.seed, synthetic.SynthConfig(n_pairs=args.n_pairs))
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    ds.store.save(outdir / "store.jsonl")
    with open(outdir / "oracle.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        for pid in sorted(ds.labels):
            fh.write(
                json.dumps(
                    {
                        "id": pid,
                        "label": ds.labels[pid].value,
                        "spans": [list(s) for s in ds.spans.get(pid, [])],
                    }
                )
                + "\n"
            )
    rng = random.Random(args.seed)
    cio.write_records(ds.annotated_sample(rng), outdir / "annotated.jsonl")
    print(f"wrote store.jsonl, oracle.jsonl, annotated.jsonl to {outdir}")
    return 0


def cmd_seed(args) -> int:
    store = InstanceStore.load(args.store)
    annotated = cio.read_records(args.annotated)
    engine = Engine.from_annotated(store, EngineConfig(), annotated, args.rng_seed)
    engine.retrain()
    engine._checkpoint("L0")
    engine.save_state(args.state)
    print(f"seeded: {len(engine.state.labeled)} labeled, {len(engine.state.pool_ids)} pool")
    return 0


def cmd_schedule(args) -> int:
    engine = _engine_from_args(args)
    sink = _load_oracle(args.oracle)
    cfg = engine.config
    r = engine.state.round
    while r < cfg.combined_rounds:
        engine.run_round(
            sink, "combined", cfg.combined_batch, cfg.rotation[r % len(cfg.rotation)]
        )
        r = engine.state.round
    if not any(cp.tag == "L8" for cp in engine.state.checkpoints):
        engine._checkpoint("L8")
    while r < cfg.combined_rounds + cfg.uncertainty_rounds:
        engine.run_round(
            sink, "uncertainty", cfg.uncertainty_batch, [cfg.uncertainty_strategy]
        )
        r = engine.state.round
    if not any(cp.tag == "L13" for cp in engine.state.checkpoints):
        engine._checkpoint("L13")
    engine.save_state(args.state)
    for cp in engine.state.checkpoints:
        print(f"{cp.tag}: {json.dumps(cp.metrics)}")
    return 0


def cmd_round(args) -> int:
    engine = _engine_from_args(args)
    sink = _load_oracle(args.oracle)
    cfg = engine.config
    r = engine.state.round
    if r < cfg.combined_rounds:
        log = engine.run_round(
            sink, "combined", cfg.combined_batch, cfg.rotation[r % len(cfg.rotation)]
        )
    else:
        log = engine.run_round(
            sink, "uncertainty", cfg.uncertainty_batch, [cfg.uncertainty_strategy]
        )
    engine.save_state(args.state)
    print(json.dumps(log.canonical()))
    return 0


def cmd_augment(args) -> int:
    engine = _engine_from_args(args)
    sink = _load_oracle(args.oracle)
    cp = engine.augment(sink, extra_n=args.extra_n)
    engine.save_state(args.state)
    print(f"{cp.tag}: {json.dumps(cp.metrics)}")
    return 0


def cmd_predict(args) -> int:
    engine = _engine_from_args(args)
    detections = engine.final_predict(threshold=args.threshold)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        for det in detections:
            fh.write(json.dumps(det, ensure_ascii=False) + "\n")
    print(f"{len(detections)} pool detections at threshold {args.threshold}")
    return 0


def cmd_eval(args) -> int:
    engine = _engine_from_args(args)
    rows = [
        evalkit.MetricsRow(**cp.metrics) for cp in engine.state.checkpoints
    ]
    if engine.state.model is not None:
        rows.append(engine.test_metrics(checkpoint=f"round{engine.state.round}"))
    evalkit.write_metrics_csv(rows, args.out)
    json_out = Path(args.out).with_suffix(".json")
    evalkit.write_metrics_json(rows, json_out)
    curve = evalkit.learning_curve(rows)
    for entry in curve:
        print(json.dumps(entry))
    return 0


def cmd_stats(args) -> int:
    records = cio.read_records(args.records)
    table = corpus_stats(records)
    for key in sorted(table):
        print(f"{key}\t{json.dumps(table[key].as_dict())}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import AnnotationService, create_app

    engine = _engine_from_args(args)
    service = AnnotationService(engine, args.journal)
    app = create_app(service, static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="explicat")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="mine explicitation candidates from bitext")
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    p.add_argument("--align-a", required=True)
    p.add_argument("--align-b")
    p.add_argument("--combine", choices=["union", "intersect"], default="union")
    p.add_argument("--langs", required=True, help="e.g. en-de")
    p.add_argument("--domain", choices=["TED", "EUR", "SYNTH"], default="TED")
    p.add_argument("--tagger", required=True, help="tagger lexicon JSON")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("synth", help="generate a synthetic run directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-pairs", type=int, default=5000)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("seed", help="split annotated data and train the L0 model")
    p.add_argument("--store", required=True)
    p.add_argument("--annotated", required=True)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--state", required=True)
    p.set_defaults(func=cmd_seed)

    for name, fn, extra in [
        ("round", cmd_round, []),
        ("schedule", cmd_schedule, []),
        ("augment", cmd_augment, ["extra_n"]),
    ]:
        p = sub.add_parser(name, help=f"run AL {name} with a scripted oracle")
        p.add_argument("--store", required=True)
        p.add_argument("--state", required=True)
        p.add_argument("--oracle", required=True, help="JSONL {id,label,spans}")
        if "extra_n" in extra:
            p.add_argument("--extra-n", type=int, default=1000)
        p.set_defaults(func=fn)

    p = sub.add_parser("predict", help="final classifier sweep over the pool")
    p.add_argument("--store", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval", help="checkpoint metrics to CSV/JSON")
    p.add_argument("--store", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--out", required=True, help="CSV path (.json written alongside)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("stats", help="corpus statistics from a records file")
    p.add_argument("--records", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("serve", help="run the annotation HTTP service")
    p.add_argument("--store", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--journal", required=True)
    p.add_argument("--static", help="directory of built UI assets")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
