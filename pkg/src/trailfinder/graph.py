"""Site snapshot loading, the directed web graph and content-equality classes.

A snapshot is a UTF-8 file of line-delimited JSON records, one page per
line, with fields ``url``, ``title``, ``content`` and ``links``. Page IDs
are consecutive integers assigned from 1 in first-seen record order.
Links whose target URL has no record in the snapshot are dropped, so the
ID space stays dense.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence
from urllib.parse import urljoin, urlsplit, urlunsplit


class SnapshotError(ValueError):
    """Raised for malformed or inconsistent snapshot input."""


class UnknownNodeError(KeyError):
    """Raised when a page ID is outside [1, node_count]."""


def normalize_url(url: str, base: str | None = None) -> str:
    """Canonical URL form: resolved against ``base``, lowercase scheme and
    host, fragment stripped, trailing slashes stripped from the path."""
    raw = urljoin(base, url) if base else url
    parts = urlsplit(raw)
    path = parts.path.rstrip("/")
    return urlunsplit((parts.scheme.lower(), parts.netloc.lower(), path, parts.query, ""))


def checksum_body(body: str) -> str:
    return hashlib.sha256(body.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class Document:
    id: int
    url: str
    title: str
    body: str
    checksum: str


class DocumentStore:
    """Documents keyed by page ID; iteration follows ID order."""

    def __init__(self, docs: Sequence[Document]):
        self._docs = list(docs)
        self._by_id = {d.id: d for d in self._docs}

    def __len__(self) -> int:
        return len(self._docs)

    def __iter__(self) -> Iterator[Document]:
        return iter(self._docs)

    def get(self, doc_id: int) -> Document:
        try:
            return self._by_id[doc_id]
        except KeyError:
            raise UnknownNodeError(doc_id) from None


class WebGraph:
    """Immutable directed graph over page IDs 1..node_count."""

    def __init__(self, urls: Sequence[str], out_edges: Sequence[Sequence[int]]):
        if len(urls) != len(out_edges):
            raise ValueError("urls and out_edges length mismatch")
        n = len(urls)
        self.node_count = n
        self._urls = [""] + list(urls)
        self._id_of = {u: i + 1 for i, u in enumerate(urls)}
        if len(self._id_of) != n:
            raise ValueError("duplicate URLs")
        self._out: list[list[int]] = [[] for _ in range(n + 1)]
        self._in: list[list[int]] = [[] for _ in range(n + 1)]
        for src0, targets in enumerate(out_edges):
            src = src0 + 1
            seen = set()
            for t in targets:
                if not 1 <= t <= n:
                    raise ValueError(f"edge target {t} out of range")
                if t in seen:
                    continue
                seen.add(t)
                self._out[src].append(t)
        for src in range(1, n + 1):
            for t in self._out[src]:
                self._in[t].append(src)
        self.edge_count = sum(len(self._out[i]) for i in range(1, n + 1))
        self._edge_set = {(s, t) for s in range(1, n + 1) for t in self._out[s]}

    def _check(self, node_id: int) -> None:
        if not isinstance(node_id, int) or not 1 <= node_id <= self.node_count:
            raise UnknownNodeError(node_id)

    def outlinks(self, node_id: int) -> list[int]:
        self._check(node_id)
        return list(self._out[node_id])

    def inlinks(self, node_id: int) -> list[int]:
        self._check(node_id)
        return list(self._in[node_id])

    def outdegree(self, node_id: int) -> int:
        self._check(node_id)
        return len(self._out[node_id])

    def has_edge(self, src: int, dst: int) -> bool:
        return (src, dst) in self._edge_set

    def url_of(self, node_id: int) -> str:
        self._check(node_id)
        return self._urls[node_id]

    def id_of(self, url: str) -> int:
        try:
            return self._id_of[url]
        except KeyError:
            raise UnknownNodeError(url) from None

    def __contains__(self, node_id: int) -> bool:
        return isinstance(node_id, int) and 1 <= node_id <= self.node_count

    def node_ids(self) -> range:
        return range(1, self.node_count + 1)

    # raw adjacency, used by hot loops that cannot afford the copies above
    def raw_out(self) -> list[list[int]]:
        return self._out


class ContentClasses:
    """Equivalence classes of byte-identical page bodies.

    Class IDs are the smallest member ID of each class, so a page with
    unique content is its own class.
    """

    def __init__(self, class_of: Sequence[int]):
        self._class = [0] + list(class_of)

    def class_of(self, node_id: int) -> int:
        return self._class[node_id]

    def same(self, a: int, b: int) -> bool:
        return self._class[a] == self._class[b]


def build_content_classes(store: DocumentStore) -> ContentClasses:
    by_checksum: dict[str, list[Document]] = {}
    for doc in store:
        by_checksum.setdefault(doc.checksum, []).append(doc)
    class_of = [0] * len(store)
    for group in by_checksum.values():
        # checksum match is confirmed by a full comparison of the bodies
        reps: list[Document] = []
        for doc in group:
            for rep in reps:
                if doc.body == rep.body:
                    class_of[doc.id - 1] = class_of[rep.id - 1]
                    break
            else:
                reps.append(doc)
                class_of[doc.id - 1] = doc.id
    return ContentClasses(class_of)


@dataclass(frozen=True)
class GraphStats:
    beta: int
    w: float
    edge_count: int
    node_count: int


def graph_stats(graph: WebGraph) -> GraphStats:
    """beta is the maximal outdegree; w is the weighted average outdegree
    sum_n outdeg(n) * indeg(n) / |E|, with 0/0 contributions taken as 0."""
    if graph.node_count == 0:
        raise ValueError("empty graph")
    beta = 0
    w = 0.0
    e = graph.edge_count
    for n in graph.node_ids():
        out = len(graph.raw_out()[n])
        beta = max(beta, out)
        if e:
            w += out * (len(graph._in[n]) / e)
    return GraphStats(beta=beta, w=w, edge_count=e, node_count=graph.node_count)


def parse_snapshot(path: str | Path) -> list[dict]:
    """Read and validate snapshot records without building the graph."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SnapshotError(f"line {lineno}: invalid JSON ({exc.msg})") from None
            if not isinstance(rec, dict):
                raise SnapshotError(f"line {lineno}: record is not an object")
            for field, kind in (("url", str), ("title", str), ("content", str), ("links", list)):
                if field not in rec:
                    raise SnapshotError(f"line {lineno}: missing field {field!r}")
                if not isinstance(rec[field], kind):
                    raise SnapshotError(f"line {lineno}: field {field!r} has wrong type")
            if not all(isinstance(x, str) for x in rec["links"]):
                raise SnapshotError(f"line {lineno}: links must be strings")
            rec["_line"] = lineno
            records.append(rec)
    if not records:
        raise SnapshotError("snapshot contains no records")
    return records


def build_from_records(records: Iterable[dict]) -> tuple[WebGraph, DocumentStore]:
    urls: list[str] = []
    id_of: dict[str, int] = {}
    recs = list(records)
    for rec in recs:
        url = normalize_url(rec["url"])
        if url in id_of:
            raise SnapshotError(
                f"line {rec.get('_line', '?')}: duplicate URL {url!r}"
            )
        id_of[url] = len(urls) + 1
        urls.append(url)
    out_edges: list[list[int]] = []
    docs: list[Document] = []
    for i, rec in enumerate(recs):
        base = urls[i]
        targets = []
        for link in rec["links"]:
            target = id_of.get(normalize_url(link, base=base))
            if target is not None:
                targets.append(target)
        out_edges.append(targets)
        body = rec["content"]
        docs.append(
            Document(id=i + 1, url=base, title=rec["title"], body=body, checksum=checksum_body(body))
        )
    return WebGraph(urls, out_edges), DocumentStore(docs)


def load_snapshot(path: str | Path) -> tuple[WebGraph, DocumentStore]:
    return build_from_records(parse_snapshot(path))


# ---------------------------------------------------------------------------
# On-disk store: graph.json + documents.jsonl under one directory.
# ---------------------------------------------------------------------------

def save_store(store_dir: str | Path, graph: WebGraph, store: DocumentStore) -> None:
    d = Path(store_dir)
    d.mkdir(parents=True, exist_ok=True)
    meta = {"format": 1, "node_count": graph.node_count, "edge_count": graph.edge_count}
    (d / "meta.json").write_text(json.dumps(meta, sort_keys=True), encoding="utf-8")
    payload = {
        "urls": [graph.url_of(i) for i in graph.node_ids()],
        "out": [graph.raw_out()[i] for i in graph.node_ids()],
    }
    (d / "graph.json").write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")
    with open(d / "documents.jsonl", "w", encoding="utf-8") as fh:
        for doc in store:
            fh.write(
                json.dumps(
                    {"id": doc.id, "url": doc.url, "title": doc.title, "body": doc.body},
                    sort_keys=True,
                )
                + "\n"
            )


def load_store(store_dir: str | Path) -> tuple[WebGraph, DocumentStore]:
    d = Path(store_dir)
    if not (d / "meta.json").exists():
        raise FileNotFoundError(f"no store at {d}")
    payload = json.loads((d / "graph.json").read_text(encoding="utf-8"))
    graph = WebGraph(payload["urls"], payload["out"])
    docs = []
    with open(d / "documents.jsonl", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            docs.append(
                Document(
                    id=rec["id"],
                    url=rec["url"],
                    title=rec["title"],
                    body=rec["body"],
                    checksum=checksum_body(rec["body"]),
                )
            )
    return graph, DocumentStore(docs)
