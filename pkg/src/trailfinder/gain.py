"""Potential gain, hub scores and starting-point selection.

Potential gain rewards pages from which many short walks depart. Walk
counts to depth d satisfy t_0(n) = 1 and t_d(n) = sum of t_{d-1}(m) over
outlinks (n, m); the gain of n is the sum over depths of the discounting
function times n's share of all depth-d walks. Counts are kept as floats:
they grow like beta^d and only the per-depth fractions matter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .graph import WebGraph
from .index import RelevanceVector


def reciprocal(depth: int) -> float:
    return 1.0 / depth


@dataclass(frozen=True)
class PotentialGainVector:
    pg: tuple[float, ...]  # index 0 unused, IDs start at 1
    dmax: int
    f_tag: str = "reciprocal"

    def of(self, node_id: int) -> float:
        return self.pg[node_id]


def _edge_arrays(graph: WebGraph) -> tuple[np.ndarray, np.ndarray]:
    src, dst = [], []
    out = graph.raw_out()
    for s in graph.node_ids():
        for t in out[s]:
            src.append(s)
            dst.append(t)
    return np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64)


def depth_fractions(graph: WebGraph, dmax: int):
    """Yield (depth, fractions) where fractions[n] is node n's share of all
    walks of exactly `depth` edges; the all-zero vector when none exist."""
    if dmax < 1:
        raise ValueError("dmax must be >= 1")
    n = graph.node_count
    src, dst = _edge_arrays(graph)
    counts = np.ones(n + 1, dtype=np.float64)
    counts[0] = 0.0
    for depth in range(1, dmax + 1):
        nxt = np.zeros(n + 1, dtype=np.float64)
        if len(src):
            np.add.at(nxt, src, counts[dst])
        counts = nxt
        total = counts.sum()
        yield depth, (counts / total if total > 0.0 else counts)


def compute_potential_gain(
    graph: WebGraph,
    dmax: int = 8,
    f: Callable[[int], float] = reciprocal,
    f_tag: str = "reciprocal",
) -> PotentialGainVector:
    """Iterative computation, O(dmax * |E|) time and O(|N|) extra space."""
    pg = np.zeros(graph.node_count + 1, dtype=np.float64)
    for depth, fractions in depth_fractions(graph, dmax):
        pg += f(depth) * fractions
    return PotentialGainVector(pg=tuple(pg.tolist()), dmax=dmax, f_tag=f_tag)


def bucket_distribution(pgv: PotentialGainVector, bucket_ratio: float) -> dict[int, int]:
    """Histogram over geometric buckets [r^k, r^{k+1}); covers pg > 0 only."""
    if bucket_ratio <= 1.0:
        raise ValueError("bucket_ratio must be > 1")
    hist: dict[int, int] = {}
    log_r = math.log(bucket_ratio)
    for v in pgv.pg[1:]:
        if v > 0.0:
            k = math.floor(math.log(v) / log_r)
            hist[k] = hist.get(k, 0) + 1
    return hist


def hits_hub_scores(graph: WebGraph, iterations: int = 30) -> list[float]:
    """Kleinberg mutual reinforcement; 2-norm normalised every round.

    Returns hub scores indexed by ID (slot 0 unused).
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    n = graph.node_count
    src, dst = _edge_arrays(graph)
    hub = np.ones(n + 1, dtype=np.float64)
    hub[0] = 0.0
    auth = np.zeros(n + 1, dtype=np.float64)
    for _ in range(iterations):
        auth[:] = 0.0
        if len(src):
            np.add.at(auth, dst, hub[src])
        norm = np.linalg.norm(auth)
        if norm > 0.0:
            auth /= norm
        hub[:] = 0.0
        if len(src):
            np.add.at(hub, src, auth[dst])
        norm = np.linalg.norm(hub)
        if norm > 0.0:
            hub /= norm
    return hub.tolist()


STRATEGIES = ("mu", "mu_pg", "mu_log_pg", "mu_log_out", "hub")


def select_starting_points(
    relevance: RelevanceVector,
    pgv: PotentialGainVector | None,
    graph: WebGraph,
    strategy: str,
    k: int,
    hub: Sequence[float] | None = None,
    hub_iterations: int = 30,
) -> list[int]:
    """Top-k matching pages under the strategy score, ties to the smaller ID.

    Only pages with mu > 0 are candidates; the result may be shorter than k.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if k < 1:
        raise ValueError("k must be >= 1")
    if strategy in ("mu_pg", "mu_log_pg") and pgv is None:
        raise ValueError(f"strategy {strategy!r} needs potential gain values")
    if strategy == "hub" and hub is None:
        hub = hits_hub_scores(graph, iterations=hub_iterations)

    def rank_score(p: int, mu: float) -> float:
        if strategy == "mu":
            return mu
        if strategy == "mu_pg":
            return mu * pgv.of(p)
        if strategy == "mu_log_pg":
            return mu * math.log(1.0 + pgv.of(p))
        if strategy == "mu_log_out":
            return mu * math.log(1.0 + graph.outdegree(p))
        return mu * hub[p]

    scored = [(rank_score(p, mu), p) for p, mu in relevance.mu.items() if mu > 0.0]
    scored.sort(key=lambda t: (-t[0], t[1]))
    return [p for _, p in scored[:k]]
