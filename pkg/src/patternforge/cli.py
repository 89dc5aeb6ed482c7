"""Command-line front end.

Exit codes: 0 success (for ``match``, at least one root), 1 ``match`` found
nothing, 2 usage or input error. Machine-readable output goes to stdout or
the named files; diagnostics go to stderr at the level set by
``PATTERNFORGE_LOG`` (quiet, info, debug).
"""

from __future__ import annotations

import argparse
import logging
import os
import statistics
import sys
import time
from pathlib import Path

from .engine import STRATEGIES, MatchStats, match
from .errors import PatternForgeError
from .generator import GenConfig, generate, load_config
from .graph import GraphStore
from .io_formats import export_prolog, load_graph, save_columnar, save_facts, write_metrics_csv
from .metrics import BenchRow
from .pattern import Pattern, builtin_agile_lite, parse_pattern

log = logging.getLogger("patternforge")

_LEVELS = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def _setup_logging() -> None:
    level = _LEVELS.get(os.environ.get("PATTERNFORGE_LOG", "info").lower(), logging.INFO)
    log.handlers.clear()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(message)s"))
    log.addHandler(handler)
    log.setLevel(level)
    log.propagate = False


def _size(text: str) -> int:
    x = float(text)
    if x != int(x) or x < 0:
        raise argparse.ArgumentTypeError(f"not a whole edge count: {text}")
    return int(x)


def _sizes(text: str) -> list[int]:
    return [_size(t) for t in text.split(",") if t.strip()]


def _strategies(text: str) -> list[str]:
    out = [t.strip() for t in text.split(",") if t.strip()]
    bad = [s for s in out if s not in STRATEGIES]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown strategy {bad[0]!r}; choose from {sorted(STRATEGIES)}")
    return out


def load_pattern(source: str) -> Pattern:
    if source == "builtin:agile-lite":
        return builtin_agile_lite()
    return parse_pattern(Path(source).read_text(encoding="utf-8"))


def report_path(out: str | Path) -> Path:
    return Path(f"{out}.report.json")


def _config(args) -> GenConfig:
    text = Path(args.config).read_text(encoding="utf-8") if args.config else ""
    return load_config(text, seed=args.seed, target_edges=args.edges,
                       distractor_ratio=args.distractor_ratio, star_density=args.star_density)


# --------------------------------------------------------------- commands

def cmd_gen(args) -> int:
    cfg = _config(args)
    g, report = generate(cfg)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fp:
        (save_columnar if args.format == "columnar" else save_facts)(g, fp)
    report.save(report_path(args.out))
    log.info("wrote %s: %d vertices, %d edges, planted root %d",
             args.out, g.vertex_count, g.edge_count, report.planted_root)
    return 0


def _load(path: str) -> GraphStore:
    g, findings = load_graph(path)
    for f in findings:
        log.warning("%s: %s", f.kind, f.message)
    return g


def cmd_match(args) -> int:
    g = _load(args.graph)
    p = load_pattern(args.pattern)
    res = match(g, p, args.strategy)
    for r in sorted(res.roots):
        print(r)
    s = res.stats
    log.info("strategy=%s roots=%d atom_matches=%d rule_firings=%d inferences=%d backtracks=%d elapsed_s=%.6f",
             res.strategy, len(res.roots), s.atom_matches, s.rule_firings, s.inferences,
             s.backtracks, s.elapsed_seconds)
    return 0 if res.roots else 1


def _timed_match(g: GraphStore, p: Pattern, strategy: str, repeats: int) -> MatchStats:
    """First-run counters with the median elapsed time over ``repeats`` runs."""
    first = None
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        res = match(g, p, strategy)
        times.append(time.perf_counter() - t0)
        if first is None:
            first = res.stats
    return MatchStats(first.atom_matches, first.rule_firings, first.backtracks, statistics.median(times))


def run_bench(sizes, strategies, seed: int, clock_hz: float, cores: int = 1, repeats: int = 3,
              pattern: Pattern | None = None, rows: list | None = None) -> list[BenchRow]:
    """Generate once per size, time each strategy's match, return one row per pair.

    Rows are appended to ``rows`` as they complete, so a caller keeps the
    finished part of a sweep if a later run raises.
    """
    p = pattern or builtin_agile_lite()
    rows = [] if rows is None else rows
    for n in sizes:
        g, _ = generate(GenConfig(seed=seed, target_edges=n))
        for strategy in strategies:
            stats = _timed_match(g, p, strategy, repeats)
            row = BenchRow.from_stats(g.edge_count, strategy, stats, seed, clock_hz, cores)
            log.info("edges=%d strategy=%s elapsed_s=%.4f inferences=%d",
                     row.edges, strategy, row.elapsed_s, row.inferences)
            rows.append(row)
    return rows


def cmd_bench(args) -> int:
    rows: list[BenchRow] = []
    try:
        run_bench(args.sizes, args.strategies, args.seed, args.clock_ghz * 1e9, args.cores,
                  args.repeats, rows=rows)
    except BaseException as exc:
        with open(args.csv, "w", encoding="utf-8", newline="\n") as fp:
            write_metrics_csv(rows, fp)
            fp.write(f"# incomplete: {type(exc).__name__}: {exc}\n")
        raise
    with open(args.csv, "w", encoding="utf-8", newline="\n") as fp:
        write_metrics_csv(rows, fp)
    return 0


def cmd_export_prolog(args) -> int:
    g = _load(args.graph)
    p = load_pattern(args.pattern)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fp:
        export_prolog(g, p, args.style, fp)
    return 0


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="patternforge", description="Typed subgraph pattern benchmark.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a seeded graph with one planted match")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--edges", type=_size, required=True)
    g.add_argument("--out", required=True)
    g.add_argument("--format", choices=("facts", "columnar"), default="facts")
    g.add_argument("--config", help="key = value file; flags override it")
    g.add_argument("--distractor-ratio", type=float)
    g.add_argument("--star-density", type=float)
    g.set_defaults(func=cmd_gen)

    m = sub.add_parser("match", help="print matching roots, one per line")
    m.add_argument("--graph", required=True)
    m.add_argument("--pattern", default="builtin:agile-lite")
    m.add_argument("--strategy", choices=sorted(STRATEGIES), default="unified")
    m.set_defaults(func=cmd_match)

    b = sub.add_parser("bench", help="sweep sizes and strategies into a metrics CSV")
    b.add_argument("--sizes", type=_sizes, required=True)
    b.add_argument("--strategies", type=_strategies, default=["unified", "subpattern"])
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--clock-ghz", type=float, required=True)
    b.add_argument("--cores", type=int, default=1)
    b.add_argument("--csv", required=True)
    b.add_argument("--repeats", type=int, default=3)
    b.set_defaults(func=cmd_bench)

    e = sub.add_parser("export-prolog", help="write a standalone Prolog program")
    e.add_argument("--graph", required=True)
    e.add_argument("--style", choices=("unified", "subpattern"), default="unified")
    e.add_argument("--out", required=True)
    e.add_argument("--pattern", default="builtin:agile-lite")
    e.set_defaults(func=cmd_export_prolog)
    return ap


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (PatternForgeError, OSError, ValueError) as exc:
        log.error("error: %s: %s", type(exc).__name__, exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
