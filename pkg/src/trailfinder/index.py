"""Inverted index and per-query page relevance.

Relevance is a length-normalised tf.idf:

    mu(d) = sum over query terms t present in d of
            (1 + ln tf(t, d)) * ln(1 + N / df(t)),
    divided by (1 + ln(1 + |d|)).

Title tokens are indexed together with the body; there is no stemming and
no stopword removal, so queries behave exactly as typed.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from .graph import DocumentStore

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase and split on runs of non-alphanumeric characters."""
    return _TOKEN_RE.findall(text.lower())


@dataclass
class InvertedIndex:
    postings: dict[str, list[tuple[int, int]]]
    doc_lengths: dict[int, int]
    n_docs: int

    def doc_freq(self, term: str) -> int:
        return len(self.postings.get(term, ()))


@dataclass
class RelevanceVector:
    """Sparse page scores for one query; pages absent from ``mu`` score 0."""

    mu: dict[int, float] = field(default_factory=dict)
    matched: dict[int, frozenset[str]] = field(default_factory=dict)

    def score(self, doc_id: int) -> float:
        return self.mu.get(doc_id, 0.0)

    def matched_terms(self, doc_id: int) -> frozenset[str]:
        return self.matched.get(doc_id, frozenset())


def build_index(store: DocumentStore) -> InvertedIndex:
    if len(store) == 0:
        raise ValueError("empty document store")
    postings: dict[str, list[tuple[int, int]]] = {}
    doc_lengths: dict[int, int] = {}
    for doc in store:
        tokens = tokenize(doc.title) + tokenize(doc.body)
        doc_lengths[doc.id] = len(tokens)
        counts: dict[str, int] = {}
        for tok in tokens:
            counts[tok] = counts.get(tok, 0) + 1
        for term, tf in counts.items():
            postings.setdefault(term, []).append((doc.id, tf))
    return InvertedIndex(postings=postings, doc_lengths=doc_lengths, n_docs=len(store))


def score_query(index: InvertedIndex, query: str) -> RelevanceVector:
    terms = sorted(set(tokenize(query)))
    if not terms:
        raise ValueError("empty query")
    raw: dict[int, float] = {}
    matched: dict[int, set[str]] = {}
    n = index.n_docs
    for term in terms:
        plist = index.postings.get(term)
        if not plist:
            continue
        idf = math.log(1.0 + n / len(plist))
        for doc_id, tf in plist:
            raw[doc_id] = raw.get(doc_id, 0.0) + (1.0 + math.log(tf)) * idf
            matched.setdefault(doc_id, set()).add(term)
    mu = {
        d: v / (1.0 + math.log(1.0 + index.doc_lengths[d]))
        for d, v in raw.items()
    }
    return RelevanceVector(mu=mu, matched={d: frozenset(s) for d, s in matched.items()})


def save_index(store_dir: str | Path, index: InvertedIndex) -> None:
    payload = {
        "postings": {t: [[d, tf] for d, tf in ps] for t, ps in index.postings.items()},
        "doc_lengths": {str(d): n for d, n in index.doc_lengths.items()},
        "n_docs": index.n_docs,
    }
    (Path(store_dir) / "index.json").write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")


def load_index(store_dir: str | Path) -> InvertedIndex:
    payload = json.loads((Path(store_dir) / "index.json").read_text(encoding="utf-8"))
    return InvertedIndex(
        postings={t: [(d, tf) for d, tf in ps] for t, ps in payload["postings"].items()},
        doc_lengths={int(d): n for d, n in payload["doc_lengths"].items()},
        n_docs=payload["n_docs"],
    )
