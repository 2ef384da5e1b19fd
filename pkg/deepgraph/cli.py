"""
Command line: build graphs, run the verification suite, compute metacyclic
multipliers, manage the cover cache and embed small graphs.

Exit status: 0 success, 1 claim failure, 2 usage error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from colorama import Fore, Style
from colorama import init as colorama_init

from .analytics import parse_edge_list, report_row, universality_embed, write_report_csv
from .cache import CacheError, CoverCache, warm
from .catalog import (
    InvalidParams,
    InvalidSpec,
    MetacyclicParams,
    Unsupported,
    build_group,
    format_spec,
    metacyclic_multiplier_order,
    parse_spec,
)
from .claims import run_claims
from .config import Config, ConfigError
from .fpgroup import BudgetExceeded
from .graph import GRAPH_KINDS, BadBijection, build_graph, write_graph
from .operators import CapExceeded
from .oracles import oracle_for

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CLAIM_FAILURE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _echo(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _error(text: str) -> None:
    tint = Fore.RED if sys.stderr.isatty() else ""
    reset = Style.RESET_ALL if tint else ""
    sys.stderr.write(f"{tint}error:{reset} {text}\n")


def _file_stem(spec_text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", spec_text).strip("_")


# ## Subcommands


def cmd_build(args: argparse.Namespace, config: Config) -> int:
    spec = parse_spec(args.spec)
    G = build_group(spec)
    if G.size > config.budget.max_vertices:
        raise BudgetExceeded(f"{format_spec(spec)} has {G.size} elements, limit {config.budget.max_vertices}")
    kinds: Sequence[str] = GRAPH_KINDS if args.kind == "all" else (args.kind,)
    oracle = None
    if "deep" in kinds:
        cache = CoverCache.from_config(config)
        oracle = oracle_for(spec, config, cache)
    out_dir = Path(args.out)
    rows = []
    for kind in kinds:
        g = build_graph(G, kind, oracle if kind == "deep" else None)
        path = out_dir / f"{_file_stem(format_spec(spec))}.{kind}.{config.output_format}"
        write_graph(g, path, config.output_format)
        log.info("wrote %s (%d vertices, %d edges)", path, g.n, g.edge_count)
        _echo(str(path))
        if args.report:
            rows.append(report_row(g, config.budget))
    if args.report:
        write_report_csv(rows, args.report, append=True)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: Config) -> int:
    cache = CoverCache.from_config(config)
    report = run_claims(args.filter, config, cache)
    if not report.results:
        raise ValueError(f"no claim matches {args.filter!r}")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.csv").write_text(report.to_csv())
    (out_dir / "report.txt").write_text(report.to_text(color=False))
    (out_dir / "timings.csv").write_text(report.timings_csv())
    if report.failed:
        (out_dir / "replay.json").write_text(report.replay())
    _echo(report.to_text(color=sys.stdout.isatty() and not args.no_color))
    return EXIT_CLAIM_FAILURE if report.failed else EXIT_OK


def cmd_multiplier(args: argparse.Namespace, config: Config) -> int:
    params = MetacyclicParams(args.m, args.s, args.t, args.r)
    params.validate()
    _echo(str(metacyclic_multiplier_order(params)))
    return EXIT_OK


def cmd_cache(args: argparse.Namespace, config: Config) -> int:
    config.ensure_cache_dir()
    cache = CoverCache.from_config(config)
    if args.action == "list":
        for entry in cache.entries():
            _echo(f"{entry.fingerprint[:16]} {entry.spec or '?'} degree={entry.degree} {entry.path}")
    elif args.action == "clear":
        _echo(f"removed {cache.clear()} files")
    else:
        if not args.spec:
            raise ValueError("cache warm needs a group spec")
        entry = warm(parse_spec(args.spec), config, cache)
        _echo(f"{entry.spec} degree={entry.degree} {entry.path}")
    return EXIT_OK


def cmd_embed(args: argparse.Namespace, config: Config) -> int:
    target = parse_edge_list(args.graph)
    result = universality_embed(target, args.kind, config)
    _echo(f"{format_spec(result.spec)} order={result.spec.order}")
    for v, (x, label) in enumerate(zip(result.vertex_map, result.labels)):
        _echo(f"{v} -> {x} {label}")
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace, Config], int]] = {
    "build": cmd_build,
    "verify": cmd_verify,
    "multiplier": cmd_multiplier,
    "cache": cmd_cache,
    "embed": cmd_embed,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="deepgraph",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        description="Deep commuting graphs of finite groups through their Schur covers.",
    )
    p.add_argument("--cache-dir", type=str, default=None, help="Cover cache directory.")
    p.add_argument("--max-cosets", type=int, default=None, help="Coset enumeration limit.")
    p.add_argument("--max-vertices", type=int, default=None, help="Largest group a full graph is built for.")
    p.add_argument("--time-limit", type=float, default=None, help="Seconds allowed per claim.")
    p.add_argument("-v", "--verbose", action="count", default=0, help="More logging (repeatable).")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="Write graphs of a group.")
    b.add_argument("spec", help="Group spec, e.g. sym:5 or heis:3:1.")
    b.add_argument("kind", choices=list(GRAPH_KINDS) + ["all"], help="Graph kind.")
    b.add_argument("--format", dest="output_format", choices=["dot", "json"], default=None)
    b.add_argument("--out", type=str, default=".", help="Output directory.")
    b.add_argument("--report", type=str, default=None, help="CSV file to append analytics rows to.")

    v = sub.add_parser("verify", help="Run the claim suite.")
    v.add_argument("--filter", type=str, default=".*", help="Regular expression on claim ids.")
    v.add_argument("--out", type=str, default="verify-report", help="Report directory.")
    v.add_argument("--seed", type=int, default=None, help="Seed for sampled checks.")
    v.add_argument("--no-color", action="store_true", help="Plain terminal output.")

    m = sub.add_parser("multiplier", help="Multiplier order of a metacyclic group.")
    for name in ("m", "s", "t", "r"):
        m.add_argument(name, type=int)

    c = sub.add_parser("cache", help="Inspect or fill the cover cache.")
    c.add_argument("action", choices=["list", "clear", "warm"])
    c.add_argument("spec", nargs="?", default=None, help="Group spec for warm.")

    e = sub.add_parser("embed", help="Embed a small graph as an induced subgraph.")
    e.add_argument("graph", help="Edge list n:i-j,..., e.g. 3:0-1,1-2.")
    e.add_argument("--kind", choices=["abelian", "nonabelian"], default="abelian")
    return p


def _configure_logging(config: Config, verbose: int) -> None:
    level = {0: config.log_level, 1: "INFO"}.get(verbose, "DEBUG")
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    colorama_init()
    try:
        config = Config.from_env().with_overrides(
            cache_dir=args.cache_dir,
            max_cosets=args.max_cosets,
            max_vertices=args.max_vertices,
            time_limit=args.time_limit,
            output_format=getattr(args, "output_format", None),
            seed=getattr(args, "seed", None),
        )
    except ConfigError as e:
        _error(str(e))
        return EXIT_USAGE
    _configure_logging(config, args.verbose)
    try:
        return COMMANDS[args.command](args, config)
    except (BudgetExceeded, CapExceeded) as e:
        _error(f"budget exceeded: {e}")
        return EXIT_BUDGET
    except (CacheError, OSError) as e:
        _error(str(e))
        return EXIT_USAGE
    except (InvalidSpec, InvalidParams, Unsupported, BadBijection, ConfigError, ValueError) as e:
        _error(str(e))
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())
