"""Command-line front end.

Subcommands mirror the pipeline stages (parse, sessionize, train, mine,
predict, simulate, gen) plus ``pipeline`` which chains them end to end.
Every stage reads and writes JSON or JSON-lines files so any step can be
rerun from persisted intermediates.  Exit codes: 0 success, 1 data error
(one-line message on stderr), 2 usage error.

Set NEXTPAGE_VERBOSE=1 for progress logging on stderr.
"""

import argparse
import hashlib
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass, fields

from . import fuzzy, markov, simulator, synth
from .logs import (PageViewFilter, entry_from_dict, entry_to_dict,
                   filter_page_views, parse_log)
from .markov import TransitionModel
from .mining import build_vague_database, mine, rule_from_dict, rule_to_dict
from .predict import Predictor, prediction_to_dict
from .sessions import session_from_dict, session_to_dict, sessionize
from .simulator import simulate as run_simulation, split_sessions

log = logging.getLogger("nextpage")


@dataclass
class PipelineConfig:
    """Every knob of the end-to-end run; flags > config file > defaults."""

    format: str = "common"
    timeout_s: float = 1800.0
    max_td_s: float = 1800.0
    fuzzy_config: str | None = None
    order: int = 1
    min_support: float = 0.01
    min_confidence: float = 0.2
    min_attractiveness: float = 0.0
    max_antecedent: int = 1
    beta: float = 1.0
    gamma: float = 0.5
    cache_size: int = 100
    prefetch_k: int = 1
    context_len: int = 2
    split: float = 0.8
    seed: int = 42


def load_pipeline_config(path):
    with open(path, encoding="utf-8") as fp:
        data = json.load(fp)
    known = {f.name for f in fields(PipelineConfig)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return data


def _json_line(obj):
    return json.dumps(obj, sort_keys=True)


def _read_lines(path):
    if path == "-":
        return sys.stdin.read().splitlines()
    with open(path, encoding="utf-8") as fp:
        return fp.read().splitlines()


def _write_text(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fp:
            fp.write(text)


def _read_jsonl(path):
    return [json.loads(line) for line in _read_lines(path) if line.strip()]


def _load_sessions(path):
    return [session_from_dict(d) for d in _read_jsonl(path)]


def _load_partition(args):
    if getattr(args, "fuzzy_config", None):
        with open(args.fuzzy_config, encoding="utf-8") as fp:
            return fuzzy.partition_from_config(json.load(fp))
    return fuzzy.default_partition(args.max_td)


def _parse_context(text):
    pages = [p.strip() for p in text.split(",") if p.strip()]
    if not pages:
        raise ValueError("context must name at least one page")
    return pages


def _build_predictor(train_sessions, args, partition):
    model = markov.train(train_sessions, args.order)
    db = build_vague_database(train_sessions, partition)
    rules = mine(db, args.min_supp, args.min_conf, args.min_attr,
                 args.max_antecedent)
    log.info("trained order-%d model on %d sessions; %d rules mined",
             args.order, len(train_sessions), len(rules))
    return Predictor(model, rules, beta=args.beta, gamma=args.gamma), model, rules


def emit_report(on_report, off_report):
    """Comparison of prefetch-on vs prefetch-off runs as (text, dict)."""
    payload = {
        "prefetch_on": on_report.to_dict(),
        "prefetch_off": off_report.to_dict() if off_report else None,
        "hit_ratio_delta": (
            on_report.hit_ratio - off_report.hit_ratio if off_report else None
        ),
    }
    lines = [
        f"prefetch-on  hit ratio: {on_report.hit_ratio:.4f} "
        f"({on_report.hits}/{on_report.requests})",
    ]
    if off_report:
        lines.append(
            f"prefetch-off hit ratio: {off_report.hit_ratio:.4f} "
            f"({off_report.hits}/{off_report.requests})"
        )
        lines.append(f"delta: {payload['hit_ratio_delta']:+.4f}")
    else:
        lines.append("prefetch-off hit ratio: (not run); delta: n/a")
    lines.append(
        f"prefetch precision: {on_report.prefetch_precision:.4f} "
        f"({on_report.useful_prefetches}/{on_report.prefetches_issued}); "
        f"overhead: {on_report.extra_fetch_overhead:.4f}"
    )
    return "\n".join(lines), payload


def cmd_parse(args):
    entries, report = parse_log(_read_lines(args.log), args.format)
    if not args.no_filter:
        cfg = PageViewFilter(
            allowed_methods=frozenset(args.methods.split(",")),
            allowed_statuses=frozenset(int(s) for s in args.statuses.split(",")),
            excluded_path_suffixes=tuple(
                s for s in args.exclude_suffixes.split(",") if s
            ),
        )
        entries = filter_page_views(entries, cfg)
    _write_text(args.out, "".join(
        _json_line(entry_to_dict(e)) + "\n" for e in entries
    ))
    print(_json_line({
        "parsed_count": report.parsed_count,
        "rejected_count": report.rejected_count,
        "rejected_line_numbers": list(report.rejected_line_numbers),
        "kept_after_filter": len(entries),
    }), file=sys.stderr)
    return 0


def cmd_sessionize(args):
    entries = [entry_from_dict(d) for d in _read_jsonl(args.entries)]
    sessions = sessionize(entries, args.timeout)
    _write_text(args.out, "".join(
        _json_line(session_to_dict(s)) + "\n" for s in sessions
    ))
    log.info("%d sessions from %d entries", len(sessions), len(entries))
    return 0


def cmd_train(args):
    sessions = _load_sessions(args.sessions)
    model = markov.train(sessions, args.order)
    _write_text(args.out, json.dumps(model.to_dict(), sort_keys=True) + "\n")
    return 0


def cmd_mine(args):
    sessions = _load_sessions(args.sessions)
    partition = _load_partition(args)
    db = build_vague_database(sessions, partition)
    rules = mine(db, args.min_supp, args.min_conf, args.min_attr,
                 args.max_antecedent)
    _write_text(args.out, "".join(
        _json_line(rule_to_dict(r)) + "\n" for r in rules
    ))
    log.info("%d rules from %d vague sessions", len(rules), db.session_count)
    return 0


def cmd_predict(args):
    with open(args.model, encoding="utf-8") as fp:
        model = TransitionModel.from_dict(json.load(fp))
    rules = []
    if args.rules:
        rules = [rule_from_dict(d) for d in _read_jsonl(args.rules)]
    predictor = Predictor(model, rules, beta=args.beta, gamma=args.gamma)
    predictions = predictor.predict(_parse_context(args.context), args.top)
    print(json.dumps([prediction_to_dict(p) for p in predictions],
                     sort_keys=True, indent=2))
    return 0


def _simulate_from_sessions(sessions, args):
    train_part, test_part = split_sessions(sessions, args.split)
    partition = _load_partition(args)
    predictor, model, rules = _build_predictor(train_part, args, partition)
    on_report = run_simulation(test_part, predictor, args.cache_size,
                               args.prefetch_k, args.context_len)
    off_report = None
    if not args.skip_baseline:
        off_report = run_simulation(test_part, predictor, args.cache_size,
                                    0, args.context_len)
    return on_report, off_report, model, rules, (train_part, test_part)


def cmd_simulate(args):
    sessions = _load_sessions(args.sessions)
    on_report, off_report, _, _, _ = _simulate_from_sessions(sessions, args)
    text, payload = emit_report(on_report, off_report)
    if args.csv:
        print(simulator.SimReport.CSV_HEADER)
        print(on_report.to_csv_row())
        if off_report:
            print(off_report.to_csv_row())
    else:
        print(json.dumps(payload, sort_keys=True, indent=2))
    print(text, file=sys.stderr)
    return 0


def cmd_gen(args):
    if args.spec:
        with open(args.spec, encoding="utf-8") as fp:
            spec = synth.spec_from_dict(json.load(fp))
    else:
        spec = synth.make_spec(
            pages=args.pages,
            session_count=args.sessions,
            seed=args.seed,
            dominant=args.dominant,
            hosts=args.hosts,
            session_length_range=(args.length_min, args.length_max),
        )
    lines = synth.generate(spec)
    _write_text(args.out, "".join(line + "\n" for line in lines))
    log.info("generated %d log lines for %d sessions", len(lines),
             spec.session_count)
    return 0


def _sha256_file(path):
    digest = hashlib.sha256()
    with open(path, "rb") as fp:
        for chunk in iter(lambda: fp.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def cmd_pipeline(args):
    config = PipelineConfig()
    if args.config:
        for key, value in load_pipeline_config(args.config).items():
            setattr(config, key, value)
    overrides = {
        "format": args.format, "timeout_s": args.timeout,
        "max_td_s": args.max_td, "fuzzy_config": args.fuzzy_config,
        "order": args.order, "min_support": args.min_supp,
        "min_confidence": args.min_conf, "min_attractiveness": args.min_attr,
        "max_antecedent": args.max_antecedent, "beta": args.beta,
        "gamma": args.gamma, "cache_size": args.cache_size,
        "prefetch_k": args.prefetch_k, "context_len": args.context_len,
        "split": args.split, "seed": args.seed,
    }
    for key, value in overrides.items():
        if value is not None:
            setattr(config, key, value)

    lines = _read_lines(args.log)
    entries, report = parse_log(lines, config.format)
    entries = filter_page_views(entries)
    sessions = sessionize(entries, config.timeout_s)
    log.info("parsed %d/%d lines into %d sessions", report.parsed_count,
             report.parsed_count + report.rejected_count, len(sessions))

    stage = argparse.Namespace(
        split=config.split, order=config.order, min_supp=config.min_support,
        min_conf=config.min_confidence, min_attr=config.min_attractiveness,
        max_antecedent=config.max_antecedent, beta=config.beta,
        gamma=config.gamma, cache_size=config.cache_size,
        prefetch_k=config.prefetch_k, context_len=config.context_len,
        skip_baseline=args.skip_baseline, fuzzy_config=config.fuzzy_config,
        max_td=config.max_td_s,
    )
    on_report, off_report, model, rules, parts = _simulate_from_sessions(
        sessions, stage)
    text, payload = emit_report(on_report, off_report)

    manifest = {
        "config": asdict(config),
        "inputs": {
            "log": {
                "path": args.log,
                "sha256": _sha256_file(args.log) if args.log != "-" else None,
                "total_lines": report.parsed_count + report.rejected_count,
                "rejected_lines": report.rejected_count,
            }
        },
        "sessions": {
            "total": len(sessions),
            "train": len(parts[0]),
            "test": len(parts[1]),
        },
        "rules_mined": len(rules),
    }
    payload["manifest"] = manifest

    if args.workdir:
        os.makedirs(args.workdir, exist_ok=True)
        join = lambda name: os.path.join(args.workdir, name)
        _write_text(join("entries.jsonl"), "".join(
            _json_line(entry_to_dict(e)) + "\n" for e in entries))
        _write_text(join("sessions.jsonl"), "".join(
            _json_line(session_to_dict(s)) + "\n" for s in sessions))
        _write_text(join("model.json"),
                    json.dumps(model.to_dict(), sort_keys=True) + "\n")
        _write_text(join("rules.jsonl"), "".join(
            _json_line(rule_to_dict(r)) + "\n" for r in rules))
        _write_text(join("manifest.json"),
                    json.dumps(manifest, sort_keys=True, indent=2) + "\n")

    print(json.dumps(payload, sort_keys=True, indent=2))
    print(text, file=sys.stderr)
    return 0


def _add_mining_flags(parser, with_defaults=True):
    d = PipelineConfig()
    default = (lambda v: v) if with_defaults else (lambda v: None)
    parser.add_argument("--max-td", type=float, default=default(d.max_td_s),
                        help="dwell saturation threshold in seconds")
    parser.add_argument("--fuzzy-config", default=None,
                        help="JSON file with a custom fuzzy partition")
    parser.add_argument("--min-supp", type=float, default=default(d.min_support))
    parser.add_argument("--min-conf", type=float, default=default(d.min_confidence))
    parser.add_argument("--min-attr", type=float,
                        default=default(d.min_attractiveness))
    parser.add_argument("--max-antecedent", type=int,
                        default=default(d.max_antecedent))


def _add_sim_flags(parser, with_defaults=True):
    d = PipelineConfig()
    default = (lambda v: v) if with_defaults else (lambda v: None)
    parser.add_argument("--order", type=int, default=default(d.order))
    parser.add_argument("--beta", type=float, default=default(d.beta),
                        help="rule-confidence boost strength")
    parser.add_argument("--gamma", type=float, default=default(d.gamma),
                        help="discount for rules-only fallback scores")
    parser.add_argument("--cache-size", type=int, default=default(d.cache_size))
    parser.add_argument("--prefetch-k", type=int, default=default(d.prefetch_k))
    parser.add_argument("--context-len", type=int, default=default(d.context_len))
    parser.add_argument("--split", type=float, default=default(d.split),
                        help="fraction of sessions used for training")
    parser.add_argument("--skip-baseline", action="store_true",
                        help="do not run the prefetch-off baseline")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nextpage",
        description="Next-page prediction and prefetch simulation from web access logs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse an access log into JSON-lines entries")
    p.add_argument("--log", required=True, help="access log path, or - for stdin")
    p.add_argument("--format", choices=("common", "combined"), default="common")
    p.add_argument("--out", default="-")
    p.add_argument("--no-filter", action="store_true",
                   help="keep every parsed entry, not just page views")
    p.add_argument("--methods", default="GET")
    p.add_argument("--statuses", default="200,304")
    p.add_argument("--exclude-suffixes", default=".png,.gif,.jpg,.css,.js,.ico")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("sessionize", help="group entries into dwell-annotated sessions")
    p.add_argument("--entries", required=True)
    p.add_argument("--timeout", type=float, default=PipelineConfig().timeout_s)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_sessionize)

    p = sub.add_parser("train", help="train an order-k transition model")
    p.add_argument("--sessions", required=True)
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("mine", help="mine vague association rules from sessions")
    p.add_argument("--sessions", required=True)
    _add_mining_flags(p)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("predict", help="rank likely next pages for a context")
    p.add_argument("--model", required=True)
    p.add_argument("--rules", default=None)
    p.add_argument("--context", required=True,
                   help="comma-separated recent pages, oldest first")
    p.add_argument("--top", type=int, default=5)
    p.add_argument("--beta", type=float, default=PipelineConfig().beta)
    p.add_argument("--gamma", type=float, default=PipelineConfig().gamma)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("simulate",
                       help="split sessions, train, and replay through a prefetch cache")
    p.add_argument("--sessions", required=True)
    _add_mining_flags(p)
    _add_sim_flags(p)
    p.add_argument("--csv", action="store_true",
                   help="emit one CSV row per report instead of JSON")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("gen", help="generate a synthetic access log")
    p.add_argument("--pages", type=int, default=50)
    p.add_argument("--sessions", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--hosts", type=int, default=4)
    p.add_argument("--dominant", type=float, default=0.8,
                   help="probability mass of each page's favourite successor")
    p.add_argument("--length-min", type=int, default=2)
    p.add_argument("--length-max", type=int, default=8)
    p.add_argument("--spec", default=None,
                   help="JSON generator spec; overrides the flags above")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("pipeline",
                       help="run parse -> sessionize -> train/mine -> simulate")
    p.add_argument("--log", required=True)
    p.add_argument("--config", default=None, help="pipeline config JSON")
    p.add_argument("--format", choices=("common", "combined"), default=None)
    p.add_argument("--timeout", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workdir", default=None,
                   help="directory for persisted intermediates")
    _add_mining_flags(p, with_defaults=False)
    _add_sim_flags(p, with_defaults=False)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None):
    if os.environ.get("NEXTPAGE_VERBOSE", "").lower() in ("1", "true", "yes"):
        logging.basicConfig(level=logging.INFO, stream=sys.stderr,
                            format="nextpage: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 1
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
