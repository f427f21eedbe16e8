#!/usr/bin/env python3
"""Run the parameter-trend experiments on a seeded synthetic site and
write one CSV per experiment to results/ (override with --out).

Experiments: iteration sweeps for both phases, the explore/converge
ratio sweep, the starting-point count sweep, and the starting-point
strategy comparison. Deterministic for fixed seeds.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from trailfinder.harness import (  # noqa: E402
    GraphBundle,
    SweepSpec,
    compare_strategies,
    rows_to_csv,
    run_sweep,
    synthesize_records,
)

TOPIC_QUERIES = ["term061 term065", "term121 term125", "term181 term185"]
COMMON_QUERIES = ["term008", "term012", "term015"]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results", help="output directory")
    parser.add_argument("--nodes", type=int, default=2000)
    parser.add_argument("--graph-seed", type=int, default=7)
    parser.add_argument("--seeds", type=int, default=10, help="engine seeds per grid point")
    args = parser.parse_args()

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    print(f"building {args.nodes}-node synthetic site (seed {args.graph_seed})", flush=True)
    bundle = GraphBundle.from_records(
        synthesize_records(args.nodes, 1.0, args.graph_seed)
    )
    seeds = list(range(args.seeds))
    base = dict(nodes=args.nodes, graph_seed=args.graph_seed, seeds=seeds, k=[10])

    runs = {
        "sweep_iconverge.csv": SweepSpec(
            iexplore=[0], iconverge=[0, 5, 15, 40, 100], queries=COMMON_QUERIES[:2], **base
        ),
        "sweep_iexplore.csv": SweepSpec(
            iexplore=[0, 5, 15, 40, 100], iconverge=[0], queries=COMMON_QUERIES[:2], **base
        ),
        "sweep_ratio.csv": SweepSpec(
            iexplore=list(range(0, 101, 10)),
            iconverge=[-1],  # placeholder, filled below
            queries=TOPIC_QUERIES,
            **base,
        ),
        "sweep_k.csv": SweepSpec(
            iexplore=[25], iconverge=[25], queries=COMMON_QUERIES[:2],
            nodes=args.nodes, graph_seed=args.graph_seed, seeds=seeds, k=[1, 5, 10, 20],
        ),
    }

    for name, spec in runs.items():
        if name == "sweep_ratio.csv":
            # the ratio sweep pairs each iexplore with iconverge = 100 - iexplore
            rows = []
            for ie in spec.iexplore:
                point = SweepSpec(
                    iexplore=[ie], iconverge=[100 - ie], queries=spec.queries, **base
                )
                rows.extend(run_sweep(point, bundle=bundle))
        else:
            rows = run_sweep(spec, bundle=bundle)
        (out_dir / name).write_text(rows_to_csv(rows))
        print(f"wrote {out_dir / name} ({len(rows)} rows)", flush=True)

    strategy_spec = SweepSpec(
        iexplore=[25], iconverge=[25], queries=COMMON_QUERIES,
        strategy=["mu", "mu_pg", "mu_log_pg", "mu_log_out", "hub"],
        nodes=args.nodes, graph_seed=args.graph_seed, seeds=list(range(30)), k=[10],
    )
    rows = compare_strategies(strategy_spec, bundle=bundle)
    (out_dir / "strategies.csv").write_text(rows_to_csv(rows))
    print(f"wrote {out_dir / 'strategies.csv'} ({len(rows)} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
