import random

import numpy as np
import pytest

from trailfinder.gain import (
    bucket_distribution,
    compute_potential_gain,
    hits_hub_scores,
    select_starting_points,
)
from trailfinder.graph import WebGraph
from trailfinder.index import RelevanceVector

from conftest import graph_from_edges
from oracles import potential_gain_by_enumeration, random_graph


def _as_webgraph(out_edges):
    urls = [f"http://t.test/{i}" for i in sorted(out_edges)]
    return WebGraph(urls, [out_edges[i] for i in sorted(out_edges)])


def test_two_node_cycle():
    graph, _ = graph_from_edges({"a": ["b"], "b": ["a"]})
    pgv = compute_potential_gain(graph, dmax=2)
    assert pgv.of(1) == pytest.approx(0.75)
    assert pgv.of(2) == pytest.approx(0.75)


def test_chain():
    graph, _ = graph_from_edges({"a": ["b"], "b": ["c"], "c": []})
    pgv = compute_potential_gain(graph, dmax=2)
    assert pgv.of(1) == pytest.approx(1.0)
    assert pgv.of(2) == pytest.approx(0.5)
    assert pgv.of(3) == 0.0


def test_sink_is_zero_any_dmax():
    graph, _ = graph_from_edges({"a": ["b"], "b": []})
    for dmax in (1, 3, 8):
        assert compute_potential_gain(graph, dmax=dmax).of(2) == 0.0


def test_dmax_must_be_positive():
    graph, _ = graph_from_edges({"a": []})
    with pytest.raises(ValueError):
        compute_potential_gain(graph, dmax=0)


def test_fraction_sums_per_depth():
    rng = random.Random(4)
    for _ in range(30):
        out_edges = random_graph(rng, 10, 25)
        graph = _as_webgraph(out_edges)
        # recompute fractions directly from walk counts at each depth
        counts = {n: 1.0 for n in out_edges}
        for _ in range(5):
            counts = {n: sum(counts[m] for m in out_edges[n]) for n in out_edges}
            total = sum(counts.values())
            if total:
                assert sum(v / total for v in counts.values()) == pytest.approx(1.0, abs=1e-9)


def test_total_gain_equals_sum_of_reachable_depth_weights():
    rng = random.Random(8)
    for _ in range(25):
        out_edges = random_graph(rng, 8, 16)
        graph = _as_webgraph(out_edges)
        dmax = rng.randint(1, 5)
        pgv = compute_potential_gain(graph, dmax=dmax)
        # a depth contributes f(d) iff any walk of that depth exists
        counts = {n: 1.0 for n in out_edges}
        expected = 0.0
        for depth in range(1, dmax + 1):
            counts = {n: sum(counts[m] for m in out_edges[n]) for n in out_edges}
            if sum(counts.values()):
                expected += 1.0 / depth
        assert sum(pgv.pg[1:]) == pytest.approx(expected, abs=1e-9)


def test_matches_walk_enumeration_oracle():
    rng = random.Random(11)
    for _ in range(60):
        out_edges = random_graph(rng, 10, 25)
        graph = _as_webgraph(out_edges)
        dmax = rng.randint(1, 5)
        pgv = compute_potential_gain(graph, dmax=dmax)
        oracle = potential_gain_by_enumeration(out_edges, sorted(out_edges), dmax)
        for n in out_edges:
            assert pgv.of(n) == pytest.approx(oracle[n], abs=1e-9)


def test_bucket_single_value():
    graph, _ = graph_from_edges({"a": ["b"], "b": ["a"]})
    pgv = compute_potential_gain(graph, dmax=2)
    hist = bucket_distribution(pgv, 2.0)
    assert sum(hist.values()) == 2
    assert len(hist) == 1


def test_bucket_ignores_zero_gain():
    graph, _ = graph_from_edges({"a": ["b"], "b": []})
    hist = bucket_distribution(compute_potential_gain(graph, dmax=3), 2.0)
    assert sum(hist.values()) == 1  # only the non-sink node


def test_bucket_ratio_validated():
    graph, _ = graph_from_edges({"a": []})
    with pytest.raises(ValueError):
        bucket_distribution(compute_potential_gain(graph, dmax=1), 1.0)


def test_hits_single_node():
    graph, _ = graph_from_edges({"a": []})
    assert hits_hub_scores(graph)[1] == 0.0


def test_hits_bipartite_hubs_equal():
    graph, _ = graph_from_edges(
        {"h1": ["a1", "a2"], "h2": ["a1", "a2"], "a1": [], "a2": []}
    )
    hub = hits_hub_scores(graph, iterations=20)
    assert hub[1] == pytest.approx(hub[2])
    assert hub[1] > 0
    assert hub[3] == pytest.approx(0.0)


def test_hits_reaches_fixed_point(fig_bundle):
    graph = fig_bundle.graph
    h50 = np.array(hits_hub_scores(graph, iterations=50))
    h51 = np.array(hits_hub_scores(graph, iterations=51))
    assert np.max(np.abs(h50 - h51)) < 1e-9


def _relevance(mu):
    return RelevanceVector(
        mu={k: v for k, v in mu.items() if v > 0},
        matched={k: frozenset({"q"}) for k, v in mu.items() if v > 0},
    )


def test_single_match_wins_any_strategy():
    graph, _ = graph_from_edges({"a": ["b"], "b": ["a"]})
    pgv = compute_potential_gain(graph, dmax=2)
    relevance = _relevance({1: 2.0})
    for strategy in ("mu", "mu_pg", "mu_log_pg", "mu_log_out", "hub"):
        assert select_starting_points(relevance, pgv, graph, strategy, 3) == [1]


def test_mu_pg_prefers_positive_gain():
    graph, _ = graph_from_edges({"a": ["b"], "b": []})  # pg(a) > 0, pg(b) = 0
    pgv = compute_potential_gain(graph, dmax=2)
    relevance = _relevance({1: 1.0, 2: 1.0})
    assert select_starting_points(relevance, pgv, graph, "mu_pg", 2) == [1, 2]
    assert select_starting_points(relevance, pgv, graph, "mu_log_pg", 2) == [1, 2]


def test_strategy_scores_never_negative_at_zero_gain():
    graph, _ = graph_from_edges({"a": [], "b": ["a"]})
    pgv = compute_potential_gain(graph, dmax=2)
    relevance = _relevance({1: 1.0, 2: 0.5})
    # page 1 has pg 0; log guard keeps it in the pool with score 0, not negative
    got = select_starting_points(relevance, pgv, graph, "mu_log_pg", 2)
    assert got == [2, 1]


def test_candidates_restricted_to_matching_pages(fig_bundle):
    relevance = fig_bundle.relevance("dotty")
    starts = select_starting_points(relevance, fig_bundle.pgv, fig_bundle.graph, "mu", 50)
    assert starts
    assert all(relevance.score(p) > 0 for p in starts)
    matching = {p for p, v in relevance.mu.items() if v > 0}
    assert set(starts) == matching


def test_order_is_deterministic_and_ranked():
    graph, _ = graph_from_edges({"a": ["b"], "b": ["a"], "c": ["a"]})
    pgv = compute_potential_gain(graph, dmax=2)
    relevance = _relevance({1: 1.0, 2: 1.0, 3: 1.0})
    got = select_starting_points(relevance, pgv, graph, "mu", 3)
    assert got == [1, 2, 3]  # equal scores: ascending IDs
    assert select_starting_points(relevance, pgv, graph, "mu", 2) == [1, 2]


def test_empty_pool_allowed():
    graph, _ = graph_from_edges({"a": []})
    pgv = compute_potential_gain(graph, dmax=1)
    assert select_starting_points(RelevanceVector(), pgv, graph, "mu_pg", 5) == []
