import json

import pytest
from hypothesis import given, strategies as st

from trailfinder.graph import (
    SnapshotError,
    UnknownNodeError,
    build_content_classes,
    build_from_records,
    graph_stats,
    load_snapshot,
    load_store,
    normalize_url,
    save_store,
)

from conftest import graph_from_edges, records_from_edges


def test_ids_assigned_in_record_order(tmp_path):
    records = records_from_edges({"a": ["b"], "b": ["c"], "c": []})
    path = tmp_path / "snap.jsonl"
    path.write_text("\n".join(json.dumps(r) for r in records))
    graph, store = load_snapshot(path)
    assert graph.id_of("http://t.test/a") == 1
    assert graph.id_of("http://t.test/b") == 2
    assert graph.id_of("http://t.test/c") == 3


def test_unindexed_link_targets_are_dropped():
    graph, _ = graph_from_edges({"a": ["b"], "b": ["c"], "c": ["http://elsewhere.example/x"]})
    # the external URL gets no node and no edge
    assert graph.node_count == 3
    assert graph.edge_count == 2
    assert graph.outlinks(3) == []


def test_duplicate_url_rejected():
    records = records_from_edges({"a": []}) + records_from_edges({"a": []})
    with pytest.raises(SnapshotError, match="duplicate URL"):
        build_from_records(records)


def test_malformed_record_names_line(tmp_path):
    path = tmp_path / "snap.jsonl"
    path.write_text('{"url": "http://a.test/", "title": "a", "content": "x", "links": []}\n{broken\n')
    with pytest.raises(SnapshotError, match="line 2"):
        load_snapshot(path)


def test_missing_field_names_line(tmp_path):
    path = tmp_path / "snap.jsonl"
    path.write_text('{"url": "http://a.test/", "title": "a", "links": []}\n')
    with pytest.raises(SnapshotError, match="line 1.*content"):
        load_snapshot(path)


def test_empty_snapshot_rejected(tmp_path):
    path = tmp_path / "snap.jsonl"
    path.write_text("\n")
    with pytest.raises(SnapshotError, match="no records"):
        load_snapshot(path)


def test_duplicate_edges_collapsed():
    graph, _ = graph_from_edges({"a": ["b", "b", "b"], "b": []})
    assert graph.outlinks(1) == [2]
    assert graph.edge_count == 1


def test_relative_links_resolve_against_record_url():
    records = [
        {"url": "http://t.test/docs/index", "title": "i", "content": "", "links": ["guide", "/top"]},
        {"url": "http://t.test/docs/guide", "title": "g", "content": "", "links": []},
        {"url": "http://t.test/top", "title": "t", "content": "", "links": []},
    ]
    graph, _ = build_from_records(records)
    assert graph.outlinks(1) == [2, 3]


@pytest.mark.parametrize(
    "raw,expected",
    [
        ("HTTP://Example.COM/Path/", "http://example.com/Path"),
        ("http://a.test/x#frag", "http://a.test/x"),
        ("http://a.test/x?q=1#frag", "http://a.test/x?q=1"),
        ("http://a.test/", "http://a.test"),
    ],
)
def test_normalize_url(raw, expected):
    assert normalize_url(raw) == expected


def test_url_id_round_trip(fig_bundle):
    graph = fig_bundle.graph
    for node in graph.node_ids():
        assert graph.id_of(graph.url_of(node)) == node


def test_unknown_id_errors():
    graph, _ = graph_from_edges({"a": []})
    for bad in (0, 2, -1):
        with pytest.raises(UnknownNodeError):
            graph.outlinks(bad)
        with pytest.raises(UnknownNodeError):
            graph.inlinks(bad)


def test_inlink_outlink_duality(fig_bundle):
    graph = fig_bundle.graph
    for s in graph.node_ids():
        for t in graph.outlinks(s):
            assert s in graph.inlinks(t)
    for t in graph.node_ids():
        for s in graph.inlinks(t):
            assert t in graph.outlinks(s)


def test_root_links_all_indexed_pages(fig_bundle):
    graph = fig_bundle.graph
    root = graph.id_of("http://graphviz.test")
    urls = {graph.url_of(t) for t in graph.outlinks(root)}
    assert "http://graphviz.test/dotty" in urls
    assert "http://graphviz.test/dot" in urls
    assert len(urls) == 8


def test_stats_two_node_cycle():
    graph, _ = graph_from_edges({"a": ["b"], "b": ["a"]})
    stats = graph_stats(graph)
    assert stats.beta == 1
    assert stats.w == pytest.approx(1.0)
    assert stats.edge_count == 2


def test_stats_no_edges():
    graph, _ = graph_from_edges({"a": [], "b": []})
    stats = graph_stats(graph)
    assert stats.beta == 0
    assert stats.w == 0.0


def test_stats_star():
    graph, _ = graph_from_edges({"hub": ["x1", "x2", "x3", "x4"], "x1": [], "x2": [], "x3": [], "x4": []})
    stats = graph_stats(graph)
    assert stats.beta == 4
    assert stats.w == pytest.approx(0.0)


def test_identical_bodies_share_content_class():
    records = records_from_edges(
        {"a": [], "b": [], "c": []},
        contents={"a": "same text", "b": "same text", "c": "other"},
    )
    _, store = build_from_records(records)
    classes = build_content_classes(store)
    assert classes.same(1, 2)
    assert not classes.same(1, 3)
    assert classes.class_of(1) == classes.class_of(2) == 1


@given(st.lists(st.integers(min_value=0, max_value=3), min_size=1, max_size=12))
def test_content_classes_are_an_equivalence(bodies):
    texts = [f"body variant {b}" for b in bodies]
    records = [
        {"url": f"http://t.test/{i}", "title": "t", "content": text, "links": []}
        for i, text in enumerate(texts)
    ]
    _, store = build_from_records(records)
    classes = build_content_classes(store)
    n = len(texts)
    for i in range(n):
        assert classes.same(i + 1, i + 1)
        for j in range(n):
            assert classes.same(i + 1, j + 1) == classes.same(j + 1, i + 1)
            assert classes.same(i + 1, j + 1) == (texts[i] == texts[j])


def test_store_round_trip(tmp_path, fig_bundle):
    save_store(tmp_path, fig_bundle.graph, fig_bundle.store)
    graph, store = load_store(tmp_path)
    assert graph.node_count == fig_bundle.graph.node_count
    assert graph.edge_count == fig_bundle.graph.edge_count
    for node in graph.node_ids():
        assert graph.url_of(node) == fig_bundle.graph.url_of(node)
        assert graph.outlinks(node) == fig_bundle.graph.outlinks(node)
        assert store.get(node).body == fig_bundle.store.get(node).body
