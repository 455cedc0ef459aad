"""Iteration/time table for smoothed L2-Lp instances, DRSOM against GD.

    python3 scripts/run_lp_table.py --seeds 0,1,2 --out results/lp
"""

import argparse
from pathlib import Path

from drsom.bench import BenchSpec, SolverEntry, run_bench, write_bench

GRID = [
    {"n": 300, "m": 100, "r": 0.15},
    {"n": 600, "m": 200, "r": 0.15},
    {"n": 900, "m": 300, "r": 0.15},
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", default="0,1,2")
    ap.add_argument("--tol", type=float, default=1e-5)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results/lp")
    args = ap.parse_args()

    solvers = [
        SolverEntry("drsom", {"mode": "radius_free", "model": {"tag": "hvp_exact"}}, label="drsom-rf-hvp"),
        SolverEntry("drsom", {"mode": "radius_free", "model": {"tag": "interpolation"}}, label="drsom-rf-interp"),
        SolverEntry("gd"),
        SolverEntry("lbfgs"),
    ]
    seeds = [int(s) for s in args.seeds.split(",")]
    spec = BenchSpec("lp", [dict(c, p=0.5, eps=0.1) for c in GRID], solvers, seeds, tol_g=args.tol)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    rows, aggs = run_bench(spec, workers=args.workers)
    write_bench(spec, rows, aggs, args.out)
    print(f"{'cell':<34} {'solver':<16} {'conv':>5} {'k':>8} {'sec':>8}")
    for a in aggs:
        print(f"{a['cell']:<34} {a['label']:<16} {a['converged']:>2}/{a['runs']:<2} {a['mean_iterations']:>8.1f} {a['mean_seconds']:>8.3f}")


if __name__ == "__main__":
    main()
