"""Query pipeline behind the CLI and the HTTP API.

A search scores pages, picks starting points, grows navigation trees per
active scoring function, then filters, sorts and merges the trails. All
state is immutable after load, so queries may run concurrently; fixed
(snapshot, config, seed) yields an identical response apart from the
elapsed-time field.
"""

from __future__ import annotations

import time
from dataclasses import replace
from pathlib import Path
from typing import Mapping

from .config import EngineConfig
from .engine import Params, Trail, run_best_trail
from .gain import compute_potential_gain, hits_hub_scores, select_starting_points
from .graph import build_content_classes, load_store
from .index import load_index, score_query, tokenize
from .postprocess import (
    ForestNode,
    filter_subsumed,
    merge_forest,
    remove_redundant_pages,
    sort_trails,
)


class EmptyQueryError(ValueError):
    pass


_OVERRIDE_PARAMS = {
    "iexplore": ("i_explore", int),
    "iconverge": ("i_converge", int),
    "df": ("df", float),
    "gamma": ("gamma", float),
    "delta": ("delta", float),
    "m": ("m", int),
    "depth_cap": ("depth_cap", int),
    "seed": ("rng_seed", int),
}


class Engine:
    def __init__(self, graph, store, index, config: EngineConfig):
        self.graph = graph
        self.store = store
        self.index = index
        self.config = config
        self.classes = build_content_classes(store)
        self.pgv = compute_potential_gain(graph, dmax=config.dmax)
        self._hub: list[float] | None = None

    @classmethod
    def open(cls, store_dir: str | Path, config: EngineConfig | None = None) -> "Engine":
        config = config or EngineConfig()
        config = replace(config, store_dir=str(store_dir))
        graph, store = load_store(store_dir)
        index = load_index(store_dir)
        return cls(graph, store, index, config)

    def hub_scores(self) -> list[float]:
        if self._hub is None:
            self._hub = hits_hub_scores(self.graph, iterations=self.config.hub_iterations)
        return self._hub

    def _resolve(self, overrides: Mapping[str, object] | None) -> tuple[Params, int, str]:
        cfg = self.config
        params = cfg.params
        k, strategy = cfg.k, cfg.strategy
        if overrides:
            updates = {}
            for key, raw in overrides.items():
                if key in _OVERRIDE_PARAMS:
                    name, cast = _OVERRIDE_PARAMS[key]
                    updates[name] = cast(raw)
                elif key == "k":
                    k = int(raw)
                elif key == "strategy":
                    strategy = str(raw)
                else:
                    raise ValueError(f"unknown override {key!r}")
            if updates:
                params = replace(params, **updates)
            # server-side caps keep request latency bounded
            k = min(k, cfg.max_k)
            params = replace(
                params,
                i_explore=min(params.i_explore, cfg.max_iterations),
                i_converge=min(params.i_converge, cfg.max_iterations),
                m=min(params.m, cfg.max_m),
            )
        return params, k, strategy

    def compute_trails(self, query: str, overrides: Mapping[str, object] | None = None) -> list[Trail]:
        if not tokenize(query):
            raise EmptyQueryError("empty query")
        return self._pipeline(score_query(self.index, query), overrides)

    def _pipeline(self, relevance, overrides: Mapping[str, object] | None = None) -> list[Trail]:
        params, k, strategy = self._resolve(overrides)
        if not relevance.mu:
            return []
        hub = self.hub_scores() if strategy == "hub" else None
        starts = select_starting_points(
            relevance, self.pgv, self.graph, strategy, k, hub=hub,
            hub_iterations=self.config.hub_iterations,
        )
        if not starts:
            return []
        trails: list[Trail] = []
        seen: set[tuple[int, ...]] = set()
        for fn in self.config.scoring:
            for trail in run_best_trail(
                starts, params, relevance, self.graph, fn,
                classes=self.classes, workers=self.config.workers,
            ):
                if trail.nodes not in seen:
                    seen.add(trail.nodes)
                    trails.append(trail)
        trails = filter_subsumed(trails, self.classes)
        reduced: list[Trail] = []
        seen = set()
        for trail in trails:
            slim = remove_redundant_pages(trail, self.graph, relevance, self.classes, params)
            if slim.nodes not in seen:
                seen.add(slim.nodes)
                reduced.append(slim)
        reduced = filter_subsumed(reduced, self.classes)
        fns = [lambda t, name=name: t.scores[name] for name in self.config.scoring]
        return sort_trails(reduced, fns)

    def search(self, query: str, overrides: Mapping[str, object] | None = None) -> dict:
        started = time.perf_counter()
        if not tokenize(query):
            raise EmptyQueryError("empty query")
        relevance = score_query(self.index, query)
        trails = self._pipeline(relevance, overrides)
        forest = merge_forest(trails, relevance) if trails else None
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        return {
            "query": query,
            "elapsed_ms": round(elapsed_ms, 3),
            "forest": [self._forest_node(r, relevance) for r in forest.roots] if forest else [],
            "flat_trails": [self._flat_trail(t, relevance) for t in trails],
        }

    def _page_entry(self, node: int, relevance) -> dict:
        doc = self.store.get(node)
        return {
            "id": node,
            "url": doc.url,
            "title": doc.title,
            "score": relevance.score(node),
            "terms": sorted(relevance.matched_terms(node)),
        }

    def _forest_node(self, fnode: ForestNode, relevance) -> dict:
        entry = self._page_entry(fnode.node, relevance)
        entry["best_rank"] = fnode.best_rank
        entry["end_ranks"] = list(fnode.end_ranks)
        entry["children"] = [self._forest_node(c, relevance) for c in fnode.children]
        return entry

    def _flat_trail(self, trail: Trail, relevance) -> dict:
        return {
            "nodes": [self._page_entry(n, relevance) for n in trail.nodes],
            "scores": {name: trail.scores[name] for name in self.config.scoring},
            "terms": sorted(trail.terms_matched),
        }

    def page(self, page_id: int) -> dict | None:
        if page_id not in self.graph:
            return None
        doc = self.store.get(page_id)
        return {
            "id": page_id,
            "url": doc.url,
            "title": doc.title,
            "outlinks": self.graph.outlinks(page_id),
            "inlinks": self.graph.inlinks(page_id),
            "pg": self.pgv.of(page_id),
        }
