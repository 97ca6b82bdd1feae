"""Command line entry points: serve, simulate, corpus, entropy-trace, replay."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import statistics
import sys
from importlib import resources

import numpy as np

from . import metrics, simulator
from .language_prior import CorpusIndex, PriorConfig, build_index, load_word_frequencies
from .session import SessionConfig, SessionEngine, serve_stdio, serve_tcp, serve_websocket
from .simulator import EngineConfig, UserProfile


def data_path(name: str) -> str:
    return str(resources.files("noonclick").joinpath("data", name))


def _engine_config(args) -> EngineConfig:
    return EngineConfig(period_index=args.period_index, alpha=args.alpha,
                        damping_lambda=args.damping_lambda,
                        bin_count=args.bin_count)


def _add_engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--period-index", type=int, default=0,
                   help="rotation period schedule index j (T = 2.0 * 0.9^j)")
    p.add_argument("--alpha", type=float, default=99.0,
                   help="winner threshold on the posterior ratio")
    p.add_argument("--lambda", dest="damping_lambda", type=float, default=0.9)
    p.add_argument("--bin-count", type=int, default=80)


def _load_index(path: str | None) -> CorpusIndex | None:
    if path is None:
        return None
    if path.endswith(".json"):
        return CorpusIndex.load(path)
    return build_index(load_word_frequencies(path))


def cmd_serve(args) -> int:
    config = SessionConfig(engine=_engine_config(args),
                           corpus_path=None,
                           density_path=args.density)
    index = _load_index(args.corpus or data_path("corpus.tsv"))

    def factory():
        return SessionEngine(config, index=index)

    if args.transport == "stdio":
        serve_stdio(factory())
    elif args.transport == "tcp":
        serve_tcp(factory, args.host, args.port)
    else:
        serve_websocket(factory, args.host, args.port)
    return 0


def cmd_simulate(args) -> int:
    config = _engine_config(args)
    profile = UserProfile(offset_mean=args.mean, offset_sd=args.sd)
    if args.uniform or not args.phrases:
        prior = {f"c{i:03d}": 1.0 / args.clocks for i in range(args.clocks)}
        records = simulator.run_selection_batch(
            prior, profile, config, seed=args.seed, trials=args.trials,
            pretrain=not args.cold_start)
        rows = [{"trial": i, "target": r.target, "winner": r.winner,
                 "clicks": r.clicks, "correct": int(r.correct),
                 "seconds": round(r.seconds, 4), "aborted": int(r.aborted)}
                for i, r in enumerate(records)]
        summary = {
            "clocks": args.clocks,
            "trials": args.trials,
            "median_clicks": statistics.median(r.clicks for r in records),
            "mean_clicks": statistics.fmean(r.clicks for r in records),
            "error_fraction": statistics.fmean(
                0.0 if r.correct else 1.0 for r in records),
        }
    else:
        index = _load_index(args.corpus or data_path("corpus.tsv"))
        phrases = [ln.strip() for ln in open(args.phrases)
                   if ln.strip()] if args.phrases != "bundled" else None
        if phrases is None:
            with open(data_path("phrases.txt")) as fh:
                phrases = [ln.strip() for ln in fh if ln.strip()]
        rows = []
        clicks = chars = secs = 0
        for i, phrase in enumerate(phrases):
            r = simulator.simulate_typing(phrase, profile, index,
                                          config=config, seed=args.seed + i)
            rows.append({"trial": i, "target": phrase, "output": r.output,
                         "clicks": r.clicks, "seconds": round(r.seconds, 4),
                         "selections": r.selections, "errors": r.errors,
                         "aborted": int(r.aborted)})
            clicks += r.clicks
            chars += len(phrase)
            secs += r.seconds
        summary = {
            "phrases": len(phrases),
            "clicks_per_char": clicks / chars,
            "wpm": metrics.words_per_minute(chars, secs),
            "error_rate": metrics.error_rate(
                [row["target"] for row in rows],
                [row["output"] for row in rows]),
        }
    _write_rows(args.csv, rows)
    out = json.dumps(summary, indent=2)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(out + "\n")
    print(out)
    return 0


def cmd_corpus_build(args) -> int:
    index = build_index(load_word_frequencies(args.file))
    index.save(args.output)
    print(f"indexed {len(index.items())} words "
          f"({index.total_words} occurrences) -> {args.output}")
    return 0


def cmd_entropy_trace(args) -> int:
    config = _engine_config(args)
    profile = UserProfile(offset_mean=args.mean, offset_sd=args.sd)
    prior = {f"c{i:03d}": 1.0 / args.clocks for i in range(args.clocks)}
    records = simulator.run_selection_batch(
        prior, profile, config, seed=args.seed, trials=args.trials)
    rows = []
    for i, r in enumerate(records):
        for click, bits in enumerate(r.entropy_trace, 1):
            rows.append({"trial": i, "click": click,
                         "entropy_bits": round(bits, 6)})
    _write_rows(args.csv, rows)
    print(f"wrote {len(rows)} trace points for {args.trials} selections "
          f"({args.clocks} clocks) to {args.csv}")
    return 0


def cmd_replay(args) -> int:
    config = SessionConfig(engine=_engine_config(args))
    index = _load_index(args.corpus or data_path("corpus.tsv"))
    engine = SessionEngine(config, index=index)
    with open(args.log) as fh:
        messages = [json.loads(line) for line in fh if line.strip()]
    transcript = engine.replay(messages)
    for message in transcript:
        if args.winners_only and message["kind"] != "winner":
            continue
        print(json.dumps(message, separators=(",", ":")))
    return 0


def _write_rows(path: str | None, rows: list[dict]) -> None:
    if not path or not rows:
        return
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noonclick",
        description="Clock-based single-switch selection engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run a live session")
    _add_engine_flags(p)
    p.add_argument("--corpus", help="word-frequency .tsv or serialized .json index")
    p.add_argument("--density", help="path for persisted click density")
    p.add_argument("--transport", choices=["stdio", "tcp", "ws"],
                   default="stdio")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("simulate", help="run synthetic-user trials")
    _add_engine_flags(p)
    p.add_argument("--clocks", type=int, default=30)
    p.add_argument("--uniform", action="store_true",
                   help="uniform prior selection trials (no keyboard)")
    p.add_argument("--phrases", help="phrase file, or 'bundled'")
    p.add_argument("--corpus")
    p.add_argument("--mean", type=float, default=0.05,
                   help="click offset mean (normalized units)")
    p.add_argument("--sd", type=float, default=0.02,
                   help="click offset spread (normalized units)")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cold-start", action="store_true",
                   help="skip density pre-training")
    p.add_argument("--csv", help="per-trial CSV output path")
    p.add_argument("--json", help="summary JSON output path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("corpus", help="corpus tools")
    corpus_sub = p.add_subparsers(dest="corpus_command", required=True)
    pb = corpus_sub.add_parser("build", help="build a serialized index")
    pb.add_argument("file", help="word<TAB>count frequency list")
    pb.add_argument("-o", "--output", default="corpus_index.json")
    pb.set_defaults(func=cmd_corpus_build)

    p = sub.add_parser("entropy-trace",
                       help="per-click posterior entropy traces (CSV)")
    _add_engine_flags(p)
    p.add_argument("--clocks", type=int, default=30)
    p.add_argument("--mean", type=float, default=0.05)
    p.add_argument("--sd", type=float, default=0.02)
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", default="entropy_trace.csv")
    p.set_defaults(func=cmd_entropy_trace)

    p = sub.add_parser("replay", help="re-run a recorded click log")
    _add_engine_flags(p)
    p.add_argument("log", help="JSON-lines client message log")
    p.add_argument("--corpus")
    p.add_argument("--winners-only", action="store_true")
    p.set_defaults(func=cmd_replay)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
