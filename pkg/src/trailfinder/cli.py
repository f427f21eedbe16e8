"""Command line interface.

Subcommands: ingest, query, search, pg, serve, bench. Engine parameters
mirror EngineConfig; a config file (key=value) can seed any of them and
TRAILFINDER_STORE overrides the store directory.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import harness
from .config import EngineConfig, apply_store_env, config_from_pairs, load_config
from .gain import STRATEGIES, bucket_distribution, compute_potential_gain
from .graph import SnapshotError, graph_stats, load_snapshot, save_store
from .index import build_index, save_index, score_query
from .service import EmptyQueryError, Engine
from .server import make_server


def _engine_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument("--iexplore", type=int)
    parser.add_argument("--iconverge", type=int)
    parser.add_argument("--m", type=int)
    parser.add_argument("--df", type=float)
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--delta", type=float)
    parser.add_argument("--c", type=float)
    parser.add_argument("--depth-cap", type=int, dest="depth_cap")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--k", type=int)
    parser.add_argument("--dmax", type=int)
    parser.add_argument("--strategy", choices=STRATEGIES)
    parser.add_argument("--scoring", help="comma-separated scoring functions")
    parser.add_argument("--workers", type=int)


def _build_config(args: argparse.Namespace) -> EngineConfig:
    config = EngineConfig()
    if getattr(args, "config", None):
        config = load_config(args.config, config)
    pairs = {}
    for key in ("iexplore", "iconverge", "m", "df", "gamma", "delta", "c",
                "depth_cap", "seed", "k", "dmax", "strategy", "scoring", "workers"):
        value = getattr(args, key, None)
        if value is not None:
            pairs[key] = str(value)
    if pairs:
        config = config_from_pairs(pairs, config)
    return apply_store_env(config)


def _store_dir(args: argparse.Namespace, config: EngineConfig) -> str:
    store = getattr(args, "store", None) or config.store_dir
    if not store:
        raise SystemExit("no store directory given (argument or TRAILFINDER_STORE)")
    return store


def cmd_ingest(args: argparse.Namespace) -> int:
    graph, store = load_snapshot(args.snapshot)
    index = build_index(store)
    save_store(args.output, graph, store)
    save_index(args.output, index)
    stats = graph_stats(graph)
    print(
        f"ingested {stats.node_count} pages, {stats.edge_count} links "
        f"(beta={stats.beta}, w={stats.w:.4f}) -> {args.output}"
    )
    return 0


def cmd_query(args: argparse.Namespace) -> int:
    config = _build_config(args)
    engine = Engine.open(_store_dir(args, config), config)
    relevance = score_query(engine.index, args.terms)
    ranked = sorted(relevance.mu.items(), key=lambda kv: (-kv[1], kv[0]))
    for doc_id, mu in ranked[: args.limit]:
        doc = engine.store.get(doc_id)
        terms = ",".join(sorted(relevance.matched_terms(doc_id)))
        print(f"{doc_id}\t{mu:.6f}\t{terms}\t{doc.url}")
    return 0


def cmd_search(args: argparse.Namespace) -> int:
    config = _build_config(args)
    engine = Engine.open(_store_dir(args, config), config)
    trails = engine.compute_trails(args.terms)
    print(f"# query: {args.terms}")
    print(f"# trails: {len(trails)}")
    for i, trail in enumerate(trails, start=1):
        scores = " ".join(f"{name}={trail.scores[name]:.6f}" for name in config.scoring)
        terms = ",".join(sorted(trail.terms_matched))
        print(f"{i}. terms=[{terms}] {scores}")
        for node in trail.nodes:
            doc = engine.store.get(node)
            print(f"   {node}\t{doc.url}\t{doc.title}")
    return 0


def cmd_pg(args: argparse.Namespace) -> int:
    config = _build_config(args)
    engine = Engine.open(_store_dir(args, config), config)
    pgv = (
        engine.pgv
        if args.dmax in (None, config.dmax)
        else compute_potential_gain(engine.graph, dmax=args.dmax)
    )
    for node in engine.graph.node_ids():
        print(f"{node},{engine.graph.url_of(node)},{pgv.of(node):.9f}")
    if args.buckets is not None:
        hist = bucket_distribution(pgv, args.buckets)
        print("bucket,low,high,count")
        for k in sorted(hist):
            print(f"{k},{args.buckets**k:.9g},{args.buckets**(k+1):.9g},{hist[k]}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    config = _build_config(args)
    if args.listen:
        config = config_from_pairs({"listen": args.listen}, config)
    engine = Engine.open(_store_dir(args, config), config)
    assets = args.assets
    if assets is None:
        default_assets = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        assets = default_assets if default_assets.is_dir() else None
    httpd = make_server(engine, config.listen, assets)
    host, port = httpd.server_address[:2]
    print(f"listening on {host}:{port}", flush=True)
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    spec = harness.load_spec(args.spec)
    if args.strategies:
        rows = harness.compare_strategies(spec)
    else:
        rows = harness.run_sweep(spec)
    sys.stdout.write(harness.rows_to_csv(rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trailfinder", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="index a snapshot into a store directory")
    p.add_argument("snapshot")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("query", help="score pages for a query (no trails)")
    p.add_argument("store", nargs="?")
    p.add_argument("terms")
    p.add_argument("--limit", type=int, default=20)
    _engine_flags(p)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("search", help="full trail search, flat listing")
    p.add_argument("store", nargs="?")
    p.add_argument("terms")
    _engine_flags(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("pg", help="print potential gain per page")
    p.add_argument("store", nargs="?")
    p.add_argument("--buckets", type=float)
    _engine_flags(p)
    p.set_defaults(func=cmd_pg)

    p = sub.add_parser("serve", help="serve the HTTP API and web client")
    p.add_argument("store", nargs="?")
    p.add_argument("--listen")
    p.add_argument("--assets")
    _engine_flags(p)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("bench", help="run a sweep spec, CSV to stdout")
    p.add_argument("--spec", required=True)
    p.add_argument("--strategies", action="store_true", help="compare starting-point strategies")
    p.set_defaults(func=cmd_bench)

    return parser


def cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (SnapshotError, EmptyQueryError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        if exc.code and not isinstance(exc.code, int):
            print(f"error: {exc.code}", file=sys.stderr)
            return 1
        return int(exc.code or 0)


def main() -> None:
    sys.exit(cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
