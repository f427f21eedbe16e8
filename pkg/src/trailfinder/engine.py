"""The Best Trail algorithm: probabilistic best-first expansion of
navigation trees.

One tree is grown per (starting page, repetition, scoring function). Each
iteration selects a candidate tip -- score-proportionally during the
exploration phase, rank-geometrically during the convergence phase -- and
expands it into one child tip per outlink. Revisited pages get fresh tips
with recomputed trail scores. The best trail of each tree, taken over
every tip ever created, enters the result set.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .graph import ContentClasses, UnknownNodeError, WebGraph
from .index import RelevanceVector
from .scoring import (
    SCORING_FUNCTIONS,
    score_discounted,
    score_sum_distinct,
    score_weighted,
)
from .tip_table import TipSelectionTable

_JITTER = 1e-9
_FN_INDEX = {name: i for i, name in enumerate(SCORING_FUNCTIONS)}


@dataclass(frozen=True)
class Params:
    i_explore: int = 50
    i_converge: int = 50
    m: int = 1
    df: float = 0.5
    gamma: float = 0.75
    delta: float = 0.5
    c: float = 1.0
    depth_cap: int = 8
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.i_explore < 0 or self.i_converge < 0:
            raise ValueError("iteration counts must be >= 0")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if not 0.0 <= self.df < 1.0:
            raise ValueError("df must be in [0, 1)")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must be in (0, 1)")
        if not 0.0 < self.delta <= 1.0:
            raise ValueError("delta must be in (0, 1]")
        if self.c < 0.0:
            raise ValueError("c must be >= 0")
        if self.depth_cap < 1:
            raise ValueError("depth_cap must be >= 1")
        if self.rng_seed < 0:
            raise ValueError("rng_seed must be >= 0")


def make_scorer(
    name: str,
    relevance: RelevanceVector,
    classes: ContentClasses | None,
    params: Params,
) -> Callable[[Sequence[int]], float]:
    mu = relevance.mu
    if name == "sum_distinct":
        return lambda nodes: score_sum_distinct(nodes, mu, params.c, classes)
    if name == "discounted":
        return lambda nodes: score_discounted(nodes, mu, params.gamma)
    if name == "weighted":
        return lambda nodes: score_weighted(nodes, mu, params.gamma, params.delta, classes)
    raise ValueError(f"unknown scoring function {name!r}")


class Tip:
    __slots__ = ("tip_id", "parent", "node", "depth", "trail_score", "terms_trail", "terms_best_page", "expanded")

    def __init__(self, tip_id, parent, node, depth, trail_score, terms_trail, terms_best_page):
        self.tip_id = tip_id
        self.parent = parent
        self.node = node
        self.depth = depth
        self.trail_score = trail_score
        self.terms_trail = terms_trail
        self.terms_best_page = terms_best_page
        self.expanded = False

    def order_key(self) -> tuple:
        """Jitter-free comparison key; smaller sorts first (better)."""
        return (-len(self.terms_trail), -self.terms_best_page, -self.trail_score, self.tip_id)


def compare_tips(t1: Tip, t2: Tip) -> int:
    """-1 if t1 ranks ahead of t2: more query terms on the trail, then more
    terms on the best single page, then the higher trail score, then the
    lower tip id."""
    k1, k2 = t1.order_key(), t2.order_key()
    return -1 if k1 < k2 else (1 if k1 > k2 else 0)


@dataclass
class Trail:
    nodes: tuple[int, ...]
    scores: dict[str, float]
    terms_matched: frozenset[str]
    source_start: int
    ref_rho: float = 0.0


def make_trail(
    nodes: Sequence[int],
    relevance: RelevanceVector,
    classes: ContentClasses | None,
    params: Params,
    source_start: int | None = None,
) -> Trail:
    nodes = tuple(nodes)
    mu = relevance.mu
    scores = {
        "sum_distinct": score_sum_distinct(nodes, mu, params.c, classes),
        "discounted": score_discounted(nodes, mu, params.gamma),
        "weighted": score_weighted(nodes, mu, params.gamma, params.delta, classes),
    }
    terms: frozenset[str] = frozenset()
    for n in nodes:
        terms |= relevance.matched_terms(n)
    return Trail(
        nodes=nodes,
        scores=scores,
        terms_matched=terms,
        source_start=nodes[0] if source_start is None else source_start,
        ref_rho=score_sum_distinct(nodes, mu, 1.0, classes),
    )


class NavigationTree:
    """One rooted tree of traversal states plus its candidate tip table."""

    def __init__(
        self,
        start: int,
        graph: WebGraph,
        relevance: RelevanceVector,
        classes: ContentClasses | None,
        params: Params,
        scoring_fn: str,
        rng,
    ):
        if start not in graph:
            raise UnknownNodeError(start)
        self.graph = graph
        self.relevance = relevance
        self.classes = classes
        self.params = params
        self.scoring_fn = scoring_fn
        self.rng = rng
        self.scorer = make_scorer(scoring_fn, relevance, classes, params)
        self.tips: list[Tip] = []
        self.table = TipSelectionTable()
        self.start = start
        self._new_tip(None, start, [start])

    def _new_tip(self, parent: Tip | None, node: int, nodes: list[int]) -> Tip:
        matched = self.relevance.matched_terms(node)
        if parent is None:
            terms = matched
            best_page = len(matched)
            depth = 1
        else:
            terms = parent.terms_trail | matched if matched else parent.terms_trail
            best_page = max(parent.terms_best_page, len(matched))
            depth = parent.depth + 1
        tip = Tip(
            tip_id=len(self.tips) + 1,
            parent=parent,
            node=node,
            depth=depth,
            trail_score=self.scorer(nodes),
            terms_trail=terms,
            terms_best_page=best_page,
        )
        self.tips.append(tip)
        if depth < self.params.depth_cap and self.graph.raw_out()[node]:
            jitter = self.rng.random() * _JITTER
            key = (
                -len(tip.terms_trail),
                -tip.terms_best_page,
                -tip.trail_score,
                -(tip.trail_score + jitter),
                tip.tip_id,
            )
            self.table.insert(tip.tip_id, key, tip.trail_score)
        return tip

    def trail_nodes(self, tip: Tip) -> list[int]:
        nodes = []
        while tip is not None:
            nodes.append(tip.node)
            tip = tip.parent
        nodes.reverse()
        return nodes

    def expand(self, tip_id: int) -> list[int]:
        """Replace a tip by one child per outlink; returns new tip ids."""
        if not 1 <= tip_id <= len(self.tips):
            raise ValueError(f"unknown tip {tip_id}")
        tip = self.tips[tip_id - 1]
        if tip.expanded:
            raise ValueError(f"tip {tip_id} already expanded")
        if tip.depth >= self.params.depth_cap:
            raise ValueError(f"tip {tip_id} is at the depth cap")
        tip.expanded = True
        if tip_id in self.table:
            self.table.remove(tip_id)
        base = self.trail_nodes(tip)
        created = []
        for target in self.graph.raw_out()[tip.node]:
            child = self._new_tip(tip, target, base + [target])
            created.append(child.tip_id)
        return created

    def best(self) -> Trail:
        """Best trail over every tip ever created, expanded and dead-end
        tips included; ties fall to the lowest tip id."""
        top = min(self.tips, key=Tip.order_key)
        return make_trail(
            self.trail_nodes(top), self.relevance, self.classes, self.params, self.start
        )

    def run(self) -> Trail:
        p = self.params
        for _ in range(p.i_explore):
            if len(self.table) == 0:
                break
            self.expand(self.table.select_explore(self.rng))
        for j in range(p.i_converge):
            if len(self.table) == 0:
                break
            self.expand(self.table.select_converge(p.df, j, self.rng))
        return self.best()


def _tree_rng(seed: int, scoring_fn: str, start: int, rep: int):
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(_FN_INDEX[scoring_fn], start, rep))
    return np.random.default_rng(ss)


def run_best_trail(
    starts: Sequence[int],
    params: Params,
    relevance: RelevanceVector,
    graph: WebGraph,
    scoring_fn: str,
    classes: ContentClasses | None = None,
    workers: int = 1,
) -> list[Trail]:
    """M repetitions per starting page, each on an independent RNG stream
    derived from (seed, scoring function, start, repetition), so output is
    reproducible and independent of scheduling. Trails that duplicate an
    earlier node sequence are dropped."""
    starts = list(starts)
    if not starts:
        raise ValueError("no starting points")
    for s in starts:
        if s not in graph:
            raise UnknownNodeError(s)
    if scoring_fn not in SCORING_FUNCTIONS:
        raise ValueError(f"unknown scoring function {scoring_fn!r}")

    def one(job: tuple[int, int]) -> Trail:
        s, rep = job
        rng = _tree_rng(params.rng_seed, scoring_fn, s, rep)
        return NavigationTree(s, graph, relevance, classes, params, scoring_fn, rng).run()

    jobs = [(s, rep) for s in starts for rep in range(params.m)]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, jobs))
    else:
        results = [one(job) for job in jobs]
    seen: set[tuple[int, ...]] = set()
    out = []
    for trail in results:
        if trail.nodes not in seen:
            seen.add(trail.nodes)
            out.append(trail)
    return out
