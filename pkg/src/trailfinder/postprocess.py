"""Sorting, filtering and merging of trail result sets.

Subsumption compares content-class sets: a trail that visits no page
outside another, strictly better scoring trail is dropped. In-trail
redundancy removal deletes pages that can be skipped while the remaining
sequence stays navigable. Finally trails are ordered -- query-term count
first, then a Copeland aggregation of the pairwise scoring-set relation,
which is not transitive in general -- and merged on common prefixes into
a display forest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .engine import Params, Trail, make_trail
from .graph import ContentClasses, WebGraph
from .index import RelevanceVector

ScoreFn = Callable[[Trail], float]


def _class_set(trail: Trail, classes: ContentClasses | None) -> frozenset[int]:
    if classes is None:
        return frozenset(trail.nodes)
    return frozenset(classes.class_of(n) for n in trail.nodes)


def subsumes(t1: Trail, t2: Trail, classes: ContentClasses | None = None) -> bool:
    """True iff every page of t2 occurs in t1 (by content class)."""
    return _class_set(t2, classes) <= _class_set(t1, classes)


def filter_subsumed(trails: Sequence[Trail], classes: ContentClasses | None = None) -> list[Trail]:
    """Drop any trail subsumed by a strictly higher-scoring trail of the
    original set (removed trails still count as potential subsumers)."""
    sets = [_class_set(t, classes) for t in trails]
    keep = []
    for i, t in enumerate(trails):
        doomed = any(
            j != i and sets[i] <= sets[j] and trails[j].ref_rho > t.ref_rho
            for j in range(len(trails))
        )
        if not doomed:
            keep.append(t)
    return keep


def remove_redundant_pages(
    trail: Trail,
    graph: WebGraph,
    relevance: RelevanceVector,
    classes: ContentClasses | None,
    params: Params,
) -> Trail:
    """Drop pages that are irrelevant (mu = 0) or repeat earlier content,
    whenever the rest still forms a valid trail; repeats until no page
    qualifies. The first page is always kept."""

    def same(a: int, b: int) -> bool:
        return a == b if classes is None else classes.same(a, b)

    nodes = list(trail.nodes)
    changed = True
    while changed:
        changed = False
        for i in range(1, len(nodes)):
            navigable = i == len(nodes) - 1 or graph.has_edge(nodes[i - 1], nodes[i + 1])
            if not navigable:
                continue
            redundant = relevance.score(nodes[i]) == 0.0 or any(
                same(nodes[j], nodes[i]) for j in range(i)
            )
            if redundant:
                del nodes[i]
                changed = True
                break
    if tuple(nodes) == trail.nodes:
        return trail
    return make_trail(nodes, relevance, classes, params, trail.source_start)


def pairwise_better(t1: Trail, t2: Trail, fns: Sequence[ScoreFn]) -> bool:
    """True iff t1 wins the scoring-set comparison: the sums of each
    function's share f(T)/(f(T1)+f(T2)) favour t1 strictly. A function
    scoring both trails 0 contributes an even half to each side."""
    if not fns:
        raise ValueError("empty scoring function set")
    s1 = s2 = 0.0
    for f in fns:
        a, b = f(t1), f(t2)
        total = a + b
        if total == 0.0:
            s1 += 0.5
            s2 += 0.5
        else:
            s1 += a / total
            s2 += b / total
    return s1 > s2


def sort_trails(trails: Sequence[Trail], fns: Sequence[ScoreFn]) -> list[Trail]:
    """Order by distinct query terms matched, then within each group by
    Copeland count of pairwise wins, then reference score, then the node
    sequence itself. Deterministic total order, no drops."""
    groups: dict[int, list[Trail]] = {}
    for t in trails:
        groups.setdefault(len(t.terms_matched), []).append(t)
    out: list[Trail] = []
    for count in sorted(groups, reverse=True):
        group = groups[count]
        wins = [
            sum(1 for other in group if other is not t and pairwise_better(t, other, fns))
            for t in group
        ]
        order = sorted(
            range(len(group)),
            key=lambda i: (-wins[i], -group[i].ref_rho, group[i].nodes),
        )
        out.extend(group[i] for i in order)
    return out


@dataclass
class ForestNode:
    node: int
    terms: tuple[str, ...]
    best_rank: int
    end_ranks: list[int] = field(default_factory=list)
    children: list["ForestNode"] = field(default_factory=list)


@dataclass
class TrailForest:
    roots: list[ForestNode] = field(default_factory=list)


def merge_forest(trails: Sequence[Trail], relevance: RelevanceVector) -> TrailForest:
    """Merge rank-ordered trails on maximal common prefixes. Roots and
    children stay ordered by the best contained trail's rank; each node
    records the ranks of trails ending there, so the merge is lossless."""
    forest = TrailForest()
    for rank, trail in enumerate(trails):
        level = forest.roots
        current: ForestNode | None = None
        for node in trail.nodes:
            found = next((c for c in level if c.node == node), None)
            if found is None:
                found = ForestNode(
                    node=node,
                    terms=tuple(sorted(relevance.matched_terms(node))),
                    best_rank=rank,
                )
                level.append(found)
            current = found
            level = found.children
        current.end_ranks.append(rank)
    _sort_forest(forest.roots)
    return forest


def _sort_forest(nodes: list[ForestNode]) -> None:
    nodes.sort(key=lambda n: n.best_rank)
    for n in nodes:
        _sort_forest(n.children)


def unmerge(forest: TrailForest) -> list[tuple[int, ...]]:
    """Reconstruct the trail list (in rank order) from a merged forest."""
    found: list[tuple[int, tuple[int, ...]]] = []

    def walk(node: ForestNode, prefix: tuple[int, ...]) -> None:
        path = prefix + (node.node,)
        for rank in node.end_ranks:
            found.append((rank, path))
        for child in node.children:
            walk(child, path)

    for root in forest.roots:
        walk(root, ())
    found.sort()
    return [path for _, path in found]
