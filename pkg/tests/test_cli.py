import subprocess
import sys

import pytest

from trailfinder.cli import cli


@pytest.fixture()
def store(tmp_path, fig_snapshot_path, capsys):
    out = tmp_path / "store"
    assert cli(["ingest", str(fig_snapshot_path), "-o", str(out)]) == 0
    captured = capsys.readouterr()
    assert "ingested 13 pages" in captured.out
    return out


def test_unknown_subcommand_fails():
    assert cli(["frobnicate"]) != 0


def test_missing_store_fails(tmp_path):
    assert cli(["query", str(tmp_path / "absent"), "dotty"]) == 1


def test_ingest_bad_snapshot_fails(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text("{nope\n")
    assert cli(["ingest", str(bad), "-o", str(tmp_path / "s")]) == 1
    assert "line 1" in capsys.readouterr().err


def test_query_lists_scored_pages(store, capsys):
    assert cli(["query", str(store), "dotty"]) == 0
    out = capsys.readouterr().out
    lines = [l for l in out.splitlines() if l]
    assert lines
    assert any("http://graphviz.test/dotty" in l for l in lines)


def test_query_empty_terms_fails(store, capsys):
    assert cli(["query", str(store), "..."]) == 1
    assert "empty query" in capsys.readouterr().err


def test_search_prints_trails_and_is_deterministic(store, capsys):
    assert cli(["search", str(store), "dotty", "--seed", "5"]) == 0
    first = capsys.readouterr().out
    assert "# trails:" in first
    assert "http://graphviz.test/dotty" in first
    assert cli(["search", str(store), "dotty", "--seed", "5"]) == 0
    assert capsys.readouterr().out == first
    assert cli(["search", str(store), "dotty", "--seed", "5", "--workers", "4"]) == 0
    assert capsys.readouterr().out == first


def test_search_honours_store_env(store, capsys, monkeypatch):
    monkeypatch.setenv("TRAILFINDER_STORE", str(store))
    assert cli(["search", "dotty"]) == 0
    assert "# trails:" in capsys.readouterr().out


def test_pg_prints_rows_and_histogram(store, capsys):
    assert cli(["pg", str(store), "--dmax", "4", "--buckets", "2.0"]) == 0
    out = capsys.readouterr().out.splitlines()
    data = [l for l in out if l.startswith("1,")]
    assert data and data[0].count(",") == 2
    assert any(l == "bucket,low,high,count" for l in out)


def test_bench_runs_spec(tmp_path, capsys):
    spec = tmp_path / "sweep.spec"
    spec.write_text(
        "iexplore=0,2\niconverge=2\nqueries=term001\nseeds=1\nnodes=30\ngraph_seed=3\nk=2\n"
    )
    assert cli(["bench", "--spec", str(spec)]) == 0
    out = capsys.readouterr().out
    header = out.splitlines()[0]
    assert header.startswith("iexplore,iconverge,m,k,strategy,query")
    assert "sum_distinct_mean" in header
    assert len(out.splitlines()) == 3  # header + 2 grid points


def test_bench_strategies_flag(tmp_path, capsys):
    spec = tmp_path / "strat.spec"
    spec.write_text(
        "iexplore=2\niconverge=2\nqueries=term001\nseeds=1\nnodes=30\ngraph_seed=3\n"
        "k=2\nstrategy=mu,hub\nscoring=weighted\n"
    )
    assert cli(["bench", "--spec", str(spec), "--strategies"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "strategy,scoring_fn,mean,std"
    assert any(line.startswith("hub,") for line in out.splitlines())


def test_serve_prints_bound_address(store):
    proc = subprocess.Popen(
        [sys.executable, "-m", "trailfinder.cli", "serve", str(store), "--listen", "127.0.0.1:0"],
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
        text=True,
    )
    try:
        line = proc.stdout.readline().strip()
        assert line.startswith("listening on 127.0.0.1:")
        port = int(line.rpartition(":")[2])
        assert port > 0
    finally:
        proc.terminate()
        proc.wait(timeout=10)
