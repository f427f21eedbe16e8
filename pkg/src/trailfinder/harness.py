"""Seeded experiment harness: synthetic corpora, parameter sweeps and
starting-point strategy comparisons, emitting CSV rows.

The reproduction target is trend direction, not absolute values: sweeps
report the mean best-trail score per navigation tree, averaged over seeds
and repetitions, so runs are comparable across grid points. Everything is
deterministic for a fixed (spec, seeds).
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .config import parse_kv
from .engine import NavigationTree, Params, _tree_rng
from .gain import (
    PotentialGainVector,
    compute_potential_gain,
    hits_hub_scores,
    select_starting_points,
)
from .graph import (
    ContentClasses,
    DocumentStore,
    WebGraph,
    build_content_classes,
    build_from_records,
    load_snapshot,
)
from .index import InvertedIndex, RelevanceVector, build_index, score_query
from .scoring import SCORING_FUNCTIONS

# ---------------------------------------------------------------------------
# Synthetic snapshot generation
# ---------------------------------------------------------------------------

_VOCAB_SIZE = 240
_TOPICS = 12
_TOPIC_SLICE = _VOCAB_SIZE // _TOPICS
_TOPIC_TOKEN_SHARE = 0.5
_BACKLINK_PROB = 0.5
_BACKLINK_TRIES = 2
_SINK_PROB = 0.3
_OUTDEG_ZIPF = 1.7
_OUTDEG_CAP = 150


def _vocab() -> list[str]:
    return [f"term{i:03d}" for i in range(_VOCAB_SIZE)]


def synthesize_records(nodes: int, exponent: float = 1.0, seed: int = 0) -> list[dict]:
    """Preferential-attachment digraph with zipf-distributed page text.

    New nodes link to existing ones with probability proportional to
    (indegree + 1)^exponent; existing nodes occasionally gain a link to
    the newcomer, chosen by outdegree preference, so both degree tails
    grow heavy. A share of pages are link-less sinks, as on real sites.

    The vocabulary is split into topics. Each topic claims a few seed
    nodes plus part of their link neighbourhood, and those pages draw
    half their text from the topic's vocabulary slice, so related pages
    cluster in the link structure the way site sections do.
    Deterministic for a fixed seed.
    """
    if nodes < 2:
        raise ValueError("nodes must be >= 2")
    rng = np.random.default_rng(seed)
    n0 = min(3, nodes)
    out: list[list[int]] = [[] for _ in range(nodes)]
    indeg = np.zeros(nodes, dtype=np.float64)
    outdeg = np.zeros(nodes, dtype=np.float64)
    for i in range(n0):
        j = (i + 1) % n0
        if j != i:
            out[i].append(j)
            indeg[j] += 1
            outdeg[i] += 1
    for i in range(n0, nodes):
        want = 0 if rng.random() < _SINK_PROB else int(min(rng.zipf(_OUTDEG_ZIPF), _OUTDEG_CAP, i))
        if want:
            weights = (indeg[:i] + 1.0) ** exponent
            targets = rng.choice(i, size=want, replace=False, p=weights / weights.sum())
            for t in sorted(int(t) for t in targets):
                out[i].append(t)
                indeg[t] += 1
                outdeg[i] += 1
        for _ in range(_BACKLINK_TRIES):
            if rng.random() < _BACKLINK_PROB:
                weights = (outdeg[:i] + 1.0) ** exponent
                src = int(rng.choice(i, p=weights / weights.sum()))
                if i not in out[src]:
                    out[src].append(i)
                    indeg[i] += 1
                    outdeg[src] += 1

    # Topic clusters grow around well-linked pages, the way site sections
    # grow around their index pages; that is what makes navigation-aware
    # starting points worth anything on this corpus.
    topic_of: dict[int, int] = {}
    center_w = (outdeg + 1.0) ** 2
    for topic in range(_TOPICS):
        centers = rng.choice(nodes, size=max(2, nodes // 400), replace=False, p=center_w / center_w.sum())
        members: set[int] = set()
        for center in centers:
            members.add(int(center))
            for nb in out[int(center)]:
                members.add(nb)
                if rng.random() < 0.5:
                    members.update(out[nb][:6])
        for m in members:
            topic_of.setdefault(m, topic)

    vocab = _vocab()
    ranks = np.arange(1, _VOCAB_SIZE + 1, dtype=np.float64)
    term_p = ranks**-1.1
    term_p /= term_p.sum()
    slice_ranks = np.arange(1, _TOPIC_SLICE + 1, dtype=np.float64)
    slice_p = slice_ranks**-1.0
    slice_p /= slice_p.sum()
    records = []
    for i in range(nodes):
        length = int(rng.integers(15, 45))
        tokens = [vocab[int(t)] for t in rng.choice(_VOCAB_SIZE, size=length, p=term_p)]
        if i in topic_of:
            base = topic_of[i] * _TOPIC_SLICE
            replacement = rng.choice(_TOPIC_SLICE, size=int(_TOPIC_TOKEN_SHARE * length), p=slice_p)
            for pos, term in enumerate(replacement):
                tokens[pos] = vocab[base + int(term)]
        records.append(
            {
                "url": f"http://synth.test/p{i}",
                "title": f"Synthetic page {i} {tokens[0]}",
                "content": " ".join(tokens),
                "links": [f"http://synth.test/p{t}" for t in out[i]],
            }
        )
    return records


def generate_synthetic(nodes: int, exponent: float, seed: int, path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        for rec in synthesize_records(nodes, exponent, seed):
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    return path


# ---------------------------------------------------------------------------
# Reusable corpus bundle
# ---------------------------------------------------------------------------

@dataclass
class GraphBundle:
    graph: WebGraph
    store: DocumentStore
    classes: ContentClasses
    index: InvertedIndex
    pgv: PotentialGainVector
    _hub: list[float] | None = None
    _relevance: dict[str, RelevanceVector] = field(default_factory=dict)

    @classmethod
    def from_records(cls, records: Sequence[dict], dmax: int = 8) -> "GraphBundle":
        graph, store = build_from_records(records)
        return cls(
            graph=graph,
            store=store,
            classes=build_content_classes(store),
            index=build_index(store),
            pgv=compute_potential_gain(graph, dmax=dmax),
        )

    @classmethod
    def from_snapshot(cls, path: str | Path, dmax: int = 8) -> "GraphBundle":
        graph, store = load_snapshot(path)
        return cls(
            graph=graph,
            store=store,
            classes=build_content_classes(store),
            index=build_index(store),
            pgv=compute_potential_gain(graph, dmax=dmax),
        )

    def hub(self) -> list[float]:
        if self._hub is None:
            self._hub = hits_hub_scores(self.graph)
        return self._hub

    def relevance(self, query: str) -> RelevanceVector:
        if query not in self._relevance:
            self._relevance[query] = score_query(self.index, query)
        return self._relevance[query]


def per_tree_best_scores(
    bundle: GraphBundle,
    query: str,
    params: Params,
    k: int,
    strategy: str,
    scoring_fn: str,
) -> list[float]:
    """Best-trail score of every navigation tree grown for the query, one
    entry per (starting point, repetition)."""
    relevance = bundle.relevance(query)
    hub = bundle.hub() if strategy == "hub" else None
    starts = select_starting_points(relevance, bundle.pgv, bundle.graph, strategy, k, hub=hub)
    scores = []
    for s in starts:
        for rep in range(params.m):
            rng = _tree_rng(params.rng_seed, scoring_fn, s, rep)
            tree = NavigationTree(s, bundle.graph, relevance, bundle.classes, params, scoring_fn, rng)
            scores.append(tree.run().scores[scoring_fn])
    return scores


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

@dataclass
class SweepSpec:
    iexplore: list[int] = field(default_factory=lambda: [50])
    iconverge: list[int] = field(default_factory=lambda: [50])
    m: list[int] = field(default_factory=lambda: [1])
    k: list[int] = field(default_factory=lambda: [10])
    strategy: list[str] = field(default_factory=lambda: ["mu_pg"])
    queries: list[str] = field(default_factory=list)
    seeds: list[int] = field(default_factory=lambda: [0])
    repetitions: int = 1
    scoring: tuple[str, ...] = ("sum_distinct", "weighted")
    nodes: int = 500
    exponent: float = 1.0
    graph_seed: int = 0
    fixture: str | None = None
    df: float = 0.5
    gamma: float = 0.75
    delta: float = 0.5
    depth_cap: int = 8

    def __post_init__(self) -> None:
        for name in ("iexplore", "iconverge", "m", "k", "strategy", "queries", "seeds"):
            if not getattr(self, name):
                raise ValueError(f"spec list {name!r} must not be empty")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        for fn in self.scoring:
            if fn not in SCORING_FUNCTIONS:
                raise ValueError(f"unknown scoring function {fn!r}")


_LIST_INT = ("iexplore", "iconverge", "m", "k", "seeds")
_SCALARS = {
    "repetitions": int,
    "nodes": int,
    "exponent": float,
    "graph_seed": int,
    "fixture": str,
    "df": float,
    "gamma": float,
    "delta": float,
    "depth_cap": int,
}


def parse_spec(text: str) -> SweepSpec:
    """Spec files reuse the flat key=value format; lists are comma
    separated, queries are separated by ';'."""
    pairs = parse_kv(text)
    kwargs: dict = {}
    for key, value in pairs.items():
        if key in _LIST_INT:
            kwargs[key] = [int(v) for v in value.split(",") if v.strip()]
        elif key == "strategy":
            kwargs[key] = [v.strip() for v in value.split(",") if v.strip()]
        elif key == "scoring":
            kwargs[key] = tuple(v.strip() for v in value.split(",") if v.strip())
        elif key == "queries":
            kwargs[key] = [q.strip() for q in value.split(";") if q.strip()]
        elif key in _SCALARS:
            kwargs[key] = _SCALARS[key](value)
        else:
            raise ValueError(f"unknown spec key {key!r}")
    return SweepSpec(**kwargs)


def load_spec(path: str | Path) -> SweepSpec:
    return parse_spec(Path(path).read_text(encoding="utf-8"))


def _bundle_for(spec: SweepSpec) -> GraphBundle:
    if spec.fixture:
        return GraphBundle.from_snapshot(spec.fixture, dmax=spec.depth_cap)
    records = synthesize_records(spec.nodes, spec.exponent, spec.graph_seed)
    return GraphBundle.from_records(records, dmax=spec.depth_cap)


def _params_for(spec: SweepSpec, ie: int, ic: int, m: int, seed: int, rep: int) -> Params:
    return Params(
        i_explore=ie,
        i_converge=ic,
        m=m,
        df=spec.df,
        gamma=spec.gamma,
        delta=spec.delta,
        depth_cap=spec.depth_cap,
        rng_seed=seed * 1009 + rep,
    )


def run_sweep(spec: SweepSpec, bundle: GraphBundle | None = None) -> list[dict]:
    """One row per grid point and query; per-scoring-function mean and
    standard deviation of tree best-trail scores over seeds x repetitions."""
    bundle = bundle or _bundle_for(spec)
    rows = []
    grid = itertools.product(spec.iexplore, spec.iconverge, spec.m, spec.k, spec.strategy)
    for ie, ic, m, k, strategy in grid:
        for query in spec.queries:
            row = {
                "iexplore": ie,
                "iconverge": ic,
                "m": m,
                "k": k,
                "strategy": strategy,
                "query": query,
            }
            for fn in spec.scoring:
                samples: list[float] = []
                for seed in spec.seeds:
                    for rep in range(spec.repetitions):
                        params = _params_for(spec, ie, ic, m, seed, rep)
                        samples.extend(per_tree_best_scores(bundle, query, params, k, strategy, fn))
                mean = float(np.mean(samples)) if samples else 0.0
                std = float(np.std(samples)) if samples else 0.0
                row[f"{fn}_mean"] = round(mean, 6)
                row[f"{fn}_std"] = round(std, 6)
            rows.append(row)
    return rows


def compare_strategies(spec: SweepSpec, bundle: GraphBundle | None = None) -> list[dict]:
    """Mean best-trail score per starting-point strategy on identical seeds."""
    bundle = bundle or _bundle_for(spec)
    rows = []
    for strategy in spec.strategy:
        for fn in spec.scoring:
            samples: list[float] = []
            for query in spec.queries:
                for seed in spec.seeds:
                    for rep in range(spec.repetitions):
                        params = _params_for(
                            spec, spec.iexplore[0], spec.iconverge[0], spec.m[0], seed, rep
                        )
                        samples.extend(
                            per_tree_best_scores(bundle, query, params, spec.k[0], strategy, fn)
                        )
            rows.append(
                {
                    "strategy": strategy,
                    "scoring_fn": fn,
                    "mean": round(float(np.mean(samples)) if samples else 0.0, 6),
                    "std": round(float(np.std(samples)) if samples else 0.0, 6),
                }
            )
    return rows


def rows_to_csv(rows: Sequence[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def powerlaw_fit(hist: dict[int, int], bucket_ratio: float) -> tuple[float, float]:
    """Log-log least squares over nonempty buckets: (slope, r_squared)."""
    points = [(bucket_ratio ** (k + 0.5), c) for k, c in sorted(hist.items()) if c > 0]
    if len(points) < 3:
        raise ValueError("need at least 3 nonempty buckets")
    xs = np.log([p[0] for p in points])
    ys = np.log([p[1] for p in points])
    slope, intercept = np.polyfit(xs, ys, 1)
    pred = slope * xs + intercept
    ss_res = float(np.sum((ys - pred) ** 2))
    ss_tot = float(np.sum((ys - np.mean(ys)) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(slope), r2
