"""Unified command-line interface.

Subcommands: `corpus split`, `subword train|encode|decode`, `metrics score`,
`hpo run`, `humeval create|serve|ingest|report|kappa`. Exit code 0 on
success, 1 with a one-line `error: <kind>: <message>` on failure, 2 on usage
errors. LOWMT_STORE and LOWMT_BIND provide environment defaults for the
campaign store directory and the service bind address.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import corpus as corpus_mod
from . import hpo as hpo_mod
from .errors import LowmtError
from .humeval import (
    Segment,
    create_session,
    he_report,
    render_annotator_totals_tsv,
    render_category_matrix_tsv,
    render_kappa_tsv,
    render_summary_tsv,
    report_to_json,
)
from .humeval.ingest import IngestMapping, ingest_published_dataset
from .metrics import MetricsConfig, evaluate_all
from .service import AnnotationService
from .store import CampaignStore
from .subword import (
    DEFAULT_VOCAB_SIZE,
    bpe_train,
    decode,
    encode_text,
    load_model,
    save_model,
    unigram_train,
)


def _read_lines(path: str) -> list[str]:
    return Path(path).read_text(encoding="utf-8").splitlines()


def _store_dir(args) -> str:
    store = args.store or os.environ.get("LOWMT_STORE")
    if not store:
        raise LowmtError("no campaign store given (use --store or LOWMT_STORE)")
    return store


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lowmt")
    commands = parser.add_subparsers(dest="command", required=True)

    corpus_cmd = commands.add_parser("corpus", help="parallel corpus utilities")
    corpus_sub = corpus_cmd.add_subparsers(dest="subcommand", required=True)
    split = corpus_sub.add_parser("split", help="label a train/dev/test split")
    split.add_argument("--source", required=True)
    split.add_argument("--target", required=True)
    split.add_argument("--dev", type=int, required=True)
    split.add_argument("--test", type=int, required=True)
    split.add_argument("--seed", type=int, default=1)
    split.add_argument("--out", required=True, help="labeled corpus TSV")

    subword_cmd = commands.add_parser("subword", help="subword model training and use")
    subword_sub = subword_cmd.add_subparsers(dest="subcommand", required=True)
    train = subword_sub.add_parser("train")
    train.add_argument("--kind", choices=["bpe", "unigram"], required=True)
    train.add_argument("--vocab-size", type=int, default=DEFAULT_VOCAB_SIZE,
                       help="target vocabulary size (presets: 4000/8000/16000/32000)")
    train.add_argument("--input", required=True)
    train.add_argument("--model", required=True)
    train.add_argument("--seed-vocab-size", type=int, default=None)
    train.add_argument("--shrink-factor", type=float, default=0.75)
    train.add_argument("--em-iterations", type=int, default=2)
    for name in ("encode", "decode"):
        sub = subword_sub.add_parser(name)
        sub.add_argument("--model", required=True)
        sub.add_argument("--input", default=None, help="default: stdin")
        sub.add_argument("--output", default=None, help="default: stdout")

    metrics_cmd = commands.add_parser("metrics", help="automatic translation metrics")
    metrics_sub = metrics_cmd.add_subparsers(dest="subcommand", required=True)
    score = metrics_sub.add_parser("score")
    score.add_argument("--hyp", required=True)
    score.add_argument("--ref", required=True)
    score.add_argument("--lc", action="store_true", help="case-insensitive scoring")
    score.add_argument("--json", action="store_true", help="full machine-readable report")
    score.add_argument("--tsv", action="store_true", help="one BLEU/TER/CHRF3 row")

    hpo_cmd = commands.add_parser("hpo", help="staged random-search tuning")
    hpo_sub = hpo_cmd.add_subparsers(dest="subcommand", required=True)
    run = hpo_sub.add_parser("run")
    run.add_argument("--space", required=True, help="search space JSON file")
    run.add_argument("--trainer", choices=["toy", "command"], required=True)
    # dest must not collide with the top-level subcommand dest
    run.add_argument("--command", dest="trainer_command", default=None,
                     help="external trainer executable")
    run.add_argument("--cycle-steps", type=int, default=5000)
    run.add_argument("--trials-per-stage", type=int, default=None)
    run.add_argument("--patience", type=int, default=4)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--out", required=True, help="trial log JSONL")

    humeval_cmd = commands.add_parser("humeval", help="human evaluation campaigns")
    humeval_sub = humeval_cmd.add_subparsers(dest="subcommand", required=True)
    create = humeval_sub.add_parser("create")
    create.add_argument("--segments", required=True, help="segments JSON file")
    create.add_argument("--systems", required=True, help="comma-separated system ids")
    create.add_argument("--annotators", required=True, help="comma-separated annotator ids")
    create.add_argument("--seed", type=int, default=1)
    create.add_argument("--store", default=None)
    serve_p = humeval_sub.add_parser("serve")
    serve_p.add_argument("--store", default=None)
    serve_p.add_argument("--bind", default=None, help="host:port (default 127.0.0.1:8765)")
    serve_p.add_argument("--ui", default=None, help="static UI bundle directory")
    ingest = humeval_sub.add_parser("ingest")
    ingest.add_argument("--data", required=True)
    ingest.add_argument("--mapping", required=True, help="column mapping JSON file")
    ingest.add_argument("--store", default=None)
    report_p = humeval_sub.add_parser("report")
    report_p.add_argument("--store", default=None)
    report_p.add_argument("--tsv", action="store_true", help="render TSV tables")
    kappa_p = humeval_sub.add_parser("kappa")
    kappa_p.add_argument("--store", default=None)
    return parser


def _cmd_corpus_split(args) -> int:
    corpus = corpus_mod.load_parallel(args.source, args.target)
    labeled = corpus_mod.split_corpus(corpus, args.dev, args.test, args.seed)
    corpus_mod.save_tsv(labeled, args.out)
    counts = labeled.split_counts()
    print(f"train {counts['train']}\tdev {counts['dev']}\ttest {counts['test']}")
    return 0


def _cmd_subword(args) -> int:
    if args.subcommand == "train":
        lines = _read_lines(args.input)
        if args.kind == "bpe":
            model = bpe_train(lines, args.vocab_size)
        else:
            model = unigram_train(
                lines,
                args.vocab_size,
                seed_vocab_size=args.seed_vocab_size,
                shrink_factor=args.shrink_factor,
                em_iterations=args.em_iterations,
            )
        save_model(model, args.model)
        print(f"{args.kind} model written to {args.model}")
        return 0

    model = load_model(args.model)
    source = _read_lines(args.input) if args.input else sys.stdin.read().splitlines()
    out_lines = []
    for line in source:
        if args.subcommand == "encode":
            out_lines.append(" ".join(encode_text(model, line)))
        else:
            out_lines.append(decode(line.split(" ") if line else []))
    text = "\n".join(out_lines) + ("\n" if out_lines else "")
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_metrics_score(args) -> int:
    hyps = _read_lines(args.hyp)
    refs = _read_lines(args.ref)
    report = evaluate_all(hyps, refs, MetricsConfig(case_insensitive=args.lc))
    if args.json:
        print(report.to_json())
    elif args.tsv:
        print(report.tsv_row())
    else:
        print(report.summary())
    return 0


def _cmd_hpo_run(args) -> int:
    space = hpo_mod.SearchSpace.from_file(args.space)
    if args.trainer == "toy":
        trainer = hpo_mod.toy_trainer(args.seed)
    else:
        if not args.trainer_command:
            raise LowmtError("--trainer command requires --command")
        trainer = hpo_mod.CommandTrainer(args.trainer_command)
    ledger = hpo_mod.EmissionsLedger()
    best, records = hpo_mod.staged_search(
        space,
        trainer,
        cycle_steps=args.cycle_steps,
        trials_per_stage=args.trials_per_stage,
        early_stop_patience=args.patience,
        ledger=ledger,
        seed=args.seed,
    )
    hpo_mod.write_trial_log(records, args.out)
    print(json.dumps({"best_config": best, "trials": len(records), "emissions_kg": ledger.total_kg}, sort_keys=True))
    return 0


def _load_segments(path: str) -> list[Segment]:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return [
        Segment(
            id=item["id"],
            source=item["source"],
            reference=item.get("reference", ""),
            outputs=dict(item["outputs"]),
        )
        for item in payload
    ]


def _cmd_humeval(args) -> int:
    if args.subcommand == "create":
        segments = _load_segments(args.segments)
        session = create_session(
            segments,
            [s for s in args.systems.split(",") if s],
            [a for a in args.annotators.split(",") if a],
            args.seed,
        )
        store = CampaignStore(_store_dir(args))
        store.initialize(session)
        print(f"campaign created: {session.total_units} units pending in {store.root}")
        return 0

    if args.subcommand == "serve":
        bind = args.bind or os.environ.get("LOWMT_BIND") or "127.0.0.1:8765"
        store = CampaignStore(_store_dir(args))
        service = AnnotationService(store, ui_dir=args.ui)
        host, port = service.start(bind)
        print(f"serving campaign {store.root} on http://{host}:{port}", flush=True)
        try:
            while True:
                time.sleep(3600)
        except KeyboardInterrupt:
            service.stop()
        return 0

    if args.subcommand == "ingest":
        mapping = IngestMapping.from_file(args.mapping)
        session, annotations = ingest_published_dataset(args.data, mapping)
        store = CampaignStore(_store_dir(args))
        store.initialize(session)
        for submission in _submissions_from_session(session):
            store.append(submission)
        print(
            f"ingested {len(annotations)} error annotations, "
            f"{len(session.sqm_ratings)} ratings into {store.root}"
        )
        return 0

    store = CampaignStore(_store_dir(args))
    session = store.load()
    report = he_report(session, allow_partial=True)
    if args.subcommand == "kappa":
        sys.stdout.write(render_kappa_tsv(report))
        return 0
    if args.tsv:
        sys.stdout.write(render_summary_tsv(report))
        sys.stdout.write("\n")
        sys.stdout.write(render_category_matrix_tsv(report))
        sys.stdout.write("\n")
        sys.stdout.write(render_annotator_totals_tsv(report))
        if report["agreement"]:
            sys.stdout.write("\n")
            sys.stdout.write(render_kappa_tsv(report))
    else:
        sys.stdout.write(report_to_json(report))
    return 0


def _submissions_from_session(session) -> list[dict]:
    """Rewrite an ingested session's units as log entries (slot resolved back)."""
    entries = []
    ratings = {
        (r.annotator_id, r.segment_id, r.system_id): r.rating for r in session.sqm_ratings
    }
    errors: dict[tuple, list[dict]] = {}
    for tag in session.error_annotations:
        errors.setdefault((tag.annotator_id, tag.segment_id, tag.system_id), []).append(
            {"category": tag.category, "severity": tag.severity, "span": tag.span}
        )
    slots = session.slots()
    for annotator in session.annotators:
        for seg in session.segments:
            for slot in slots:
                system = session.blinding[(annotator, seg.id, slot)]
                key = (annotator, seg.id, system)
                entries.append(
                    {
                        "annotator": annotator,
                        "segment": seg.id,
                        "slot": slot,
                        "system": system,
                        "rating": ratings.get(key),
                        "errors": errors.get(key, []),
                        "timestamp": "",
                    }
                )
    return entries


def cli_dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "corpus":
            return _cmd_corpus_split(args)
        if args.command == "subword":
            return _cmd_subword(args)
        if args.command == "metrics":
            return _cmd_metrics_score(args)
        if args.command == "hpo":
            return _cmd_hpo_run(args)
        if args.command == "humeval":
            return _cmd_humeval(args)
        parser.print_usage(sys.stderr)
        return 2
    except LowmtError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_dispatch())
