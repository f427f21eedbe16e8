"""Independent reference implementations used to cross-check the engine.

These deliberately share no code with the package internals: potential
gain is checked against explicit enumeration of every walk, and the
degenerate best-first mode is checked against a naive list-based search
with its own inline trail scoring.
"""

from __future__ import annotations

import random


def enumerate_walks(out_edges: dict[int, list[int]], start: int, depth: int) -> list[tuple[int, ...]]:
    """All walks of exactly `depth` edges starting at `start`."""
    walks = []
    stack = [(start,)]
    while stack:
        walk = stack.pop()
        if len(walk) - 1 == depth:
            walks.append(walk)
            continue
        for nxt in out_edges.get(walk[-1], []):
            stack.append(walk + (nxt,))
    return walks


def potential_gain_by_enumeration(
    out_edges: dict[int, list[int]], nodes: list[int], dmax: int
) -> dict[int, float]:
    pg = {n: 0.0 for n in nodes}
    for depth in range(1, dmax + 1):
        counts = {n: len(enumerate_walks(out_edges, n, depth)) for n in nodes}
        total = sum(counts.values())
        if total == 0:
            continue
        for n in nodes:
            pg[n] += (1.0 / depth) * counts[n] / total
    return pg


def random_graph(rng: random.Random, max_nodes: int, max_edges: int) -> dict[int, list[int]]:
    n = rng.randint(1, max_nodes)
    out: dict[int, list[int]] = {i: [] for i in range(1, n + 1)}
    for _ in range(rng.randint(0, max_edges)):
        a, b = rng.randint(1, n), rng.randint(1, n)
        if b not in out[a]:
            out[a].append(b)
    return out


def _naive_weighted(trail, mu, gamma, delta):
    total = 0.0
    for i, node in enumerate(trail):
        repeats = sum(1 for j in range(i) if trail[j] == node)
        total += mu.get(node, 0.0) * gamma**i * delta**repeats
    return total


def _naive_sum_distinct(trail, mu, c):
    return sum(mu.get(n, 0.0) for n in set(trail)) / (len(trail) + c)


def best_first_reference(
    out_edges: dict[int, list[int]],
    matched: dict[int, frozenset],
    mu: dict[int, float],
    start: int,
    iterations: int,
    depth_cap: int,
    scoring_fn: str,
    gamma: float = 0.75,
    delta: float = 0.5,
    c: float = 1.0,
) -> tuple[int, ...]:
    """Deterministic best-first search over trails: at each step expand the
    best candidate (term count, best page, score, then creation order) and
    finally report the best trail seen anywhere."""

    def score(trail):
        if scoring_fn == "weighted":
            return _naive_weighted(trail, mu, gamma, delta)
        return _naive_sum_distinct(trail, mu, c)

    def key(entry):
        order, trail = entry
        terms = frozenset().union(*(matched.get(n, frozenset()) for n in trail))
        best_page = max(len(matched.get(n, frozenset())) for n in trail)
        return (-len(terms), -best_page, -score(trail), order)

    all_trails: list[tuple[int, tuple[int, ...]]] = [(0, (start,))]
    candidates: list[tuple[int, tuple[int, ...]]] = []
    counter = 1
    if out_edges.get(start) and depth_cap > 1:
        candidates.append((0, (start,)))
    for _ in range(iterations):
        if not candidates:
            break
        chosen = min(candidates, key=key)
        candidates.remove(chosen)
        _, trail = chosen
        for nxt in out_edges.get(trail[-1], []):
            extended = trail + (nxt,)
            entry = (counter, extended)
            counter += 1
            all_trails.append(entry)
            if len(extended) < depth_cap and out_edges.get(nxt):
                candidates.append(entry)
    return min(all_trails, key=key)[1]
