"""Every solver on the built-in classic functions, one line per run."""

import argparse

from drsom.bench import run_solver, starting_point
from drsom.problems import classic_suite

SOLVERS = {
    "drsom-tr-hvp": ("drsom", {"mode": "trust_radius", "model": {"tag": "hvp_exact"}}),
    "drsom-rf-interp": ("drsom", {"mode": "radius_free"}),
    "drsom-tr-corr": ("drsom", {"mode": "trust_radius", "model": {"tag": "hvp_exact"}, "corrector": {"period": 1}}),
    "gd": ("gd", {}),
    "cg": ("cg", {}),
    "lbfgs": ("lbfgs", {}),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tol", type=float, default=1e-6)
    ap.add_argument("--max-iter", type=int, default=20_000)
    args = ap.parse_args()
    print(f"{'problem':<22} {'solver':<16} {'status':<10} {'k':>6} {'n_f':>7} {'n_g':>7} {'n_hvp':>7}")
    for obj in classic_suite():
        for label, (solver, opts) in SOLVERS.items():
            rep = run_solver(solver, obj, starting_point(obj), args.tol, args.max_iter, opts)
            c = rep.counts
            print(f"{obj.name:<22} {label:<16} {rep.status:<10} {rep.iterations:>6} {c.n_f:>7} {c.n_g:>7} {c.n_hvp:>7}")


if __name__ == "__main__":
    main()
