from pathlib import Path

import pytest

from trailfinder.graph import build_from_records
from trailfinder.harness import GraphBundle

DATA_DIR = Path(__file__).parent / "data"
FIG_SNAPSHOT = DATA_DIR / "graphviz_snapshot.jsonl"


def records_from_edges(edges, contents=None, host="http://t.test"):
    """Build snapshot records for a tiny graph given name -> [names] edges."""
    contents = contents or {}
    return [
        {
            "url": f"{host}/{name}",
            "title": name,
            "content": contents.get(name, f"page {name}"),
            "links": [f"{host}/{t}" for t in targets],
        }
        for name, targets in edges.items()
    ]


def graph_from_edges(edges, contents=None):
    return build_from_records(records_from_edges(edges, contents))


@pytest.fixture(scope="session")
def fig_snapshot_path():
    return FIG_SNAPSHOT


@pytest.fixture(scope="session")
def fig_bundle():
    return GraphBundle.from_snapshot(FIG_SNAPSHOT)
