"""``drsom gen|solve|bench``: instance files, single solves, benchmark tables.

Exit codes: 0 on success (for ``solve``: only when the run converged),
1 when a solve ends without converging, 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .bench import (
    FAMILIES,
    SOLVERS,
    BenchSpec,
    SolverEntry,
    config_digest,
    generate,
    run_bench,
    run_solver,
    starting_point,
    summary_row,
    write_bench,
)
from .problems.io import load_instance, objective_for, save_instance
from .report import write_trace_csv

MODES = {"tr": "trust_radius", "rf": "radius_free", "fixed": "fixed_radius"}
MODELS = {"hvp": "hvp_exact", "fd": "hvp_fd", "interp": "interpolation"}

# built-in values for solve options that may also come from --config
SOLVE_DEFAULTS = {
    "solver": "drsom",
    "mode": "rf",
    "model": "interp",
    "corrector": "off",
    "corrector_period": 1,
    "tol": 1e-6,
    "max_iter": 10_000,
    "seed": 0,
    "time_limit": None,
    "M_est": None,
    "memory": 10,
}


class UsageError(ValueError):
    pass


def _parse_value(text: str):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def _parse_cell(text: str) -> dict:
    cell = {}
    for part in filter(None, text.split(",")):
        if "=" not in part:
            raise UsageError(f"grid entry {part!r} is not key=value")
        k, v = part.split("=", 1)
        cell[k.strip()] = _parse_value(v.strip())
    if not cell:
        raise UsageError("empty grid cell")
    return cell


def _parse_list(text: str, cast=str) -> list:
    return [cast(t.strip()) for t in text.split(",") if t.strip()]


def drsom_options(mode: str, model: str, corrector: str, period: int = 1, M_est=None, seed: int = 0, extra=None) -> dict:
    """Map CLI choices onto :class:`~drsom.solver.SolverConfig` fields."""
    if mode not in MODES:
        raise UsageError(f"unknown mode {mode!r}; choose from {sorted(MODES)}")
    if model not in MODELS:
        raise UsageError(f"unknown model {model!r}; choose from {sorted(MODELS)}")
    if corrector not in ("off", "periodic"):
        raise UsageError("corrector must be 'off' or 'periodic'")
    opts = dict(extra or {})
    opts["mode"] = MODES[mode]
    model_opts = dict(opts.get("model") or {})
    model_opts["tag"] = MODELS[model]
    opts["model"] = model_opts
    opts["corrector"] = {"period": period} if corrector == "periodic" else None
    if M_est is not None:
        opts["M_est"] = M_est
    opts["seed"] = seed
    return opts


# -- gen ---------------------------------------------------------------------


def cmd_gen(args) -> int:
    if args.family == "lp":
        params = {"n": args.n, "m": args.m, "r": args.r, "p": args.p, "eps": args.eps}
    elif args.family == "snl":
        params = {"n": args.n, "m": args.m, "rd": args.rd, "nf": args.nf}
    else:
        params = {"name": args.name}
        if args.n is not None:
            params["n"] = args.n
        if args.name in ("quadratic", "nonconvex_quartic", "convex_quartic"):
            params["seed"] = args.seed
    params = {k: v for k, v in params.items() if v is not None}
    inst = generate(args.family, params, args.seed)
    out = Path(args.out or f"{args.family}_seed{args.seed}.json")
    print(f"{save_instance(inst, out)}  {out}")
    return 0


# -- solve -------------------------------------------------------------------


def _resolve(args, file_cfg: dict) -> dict:
    """Flag value if given, else config-file value, else the built-in default."""
    out = {}
    for key, default in SOLVE_DEFAULTS.items():
        flag = getattr(args, key, None)
        out[key] = flag if flag is not None else file_cfg.get(key, default)
    return out


def cmd_solve(args) -> int:
    file_cfg = {}
    if args.config:
        file_cfg = json.loads(Path(args.config).read_text())
        if not isinstance(file_cfg, dict):
            raise UsageError("config file must hold a JSON object")
    opt = _resolve(args, file_cfg)
    if opt["solver"] not in SOLVERS:
        raise UsageError(f"unknown solver {opt['solver']!r}; choose from {SOLVERS}")

    inst, inst_digest = load_instance(args.instance)
    obj = objective_for(inst)
    if opt["solver"] == "drsom":
        options = drsom_options(
            opt["mode"], opt["model"], opt["corrector"], opt["corrector_period"], opt["M_est"], opt["seed"],
            extra=file_cfg.get("drsom"),
        )
        if options["mode"] == "fixed_radius" and "M_est" not in options and "M" in obj.meta:
            options["M_est"] = float(obj.meta["M"])
    elif opt["solver"] == "lbfgs":
        options = {"memory": opt["memory"]}
    else:
        options = {}

    rep = run_solver(opt["solver"], obj, starting_point(obj), opt["tol"], opt["max_iter"], options, opt["time_limit"])
    summary = summary_row(rep)
    summary["config_digest"] = config_digest(opt["solver"], options, opt["tol"], opt["max_iter"])
    summary["instance_digest"] = inst_digest

    if args.trace:
        with open(args.trace, "w", newline="") as fh:
            write_trace_csv(rep.trace, fh)
    text = json.dumps(summary, indent=1)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    if rep.message:
        print(rep.message, file=sys.stderr)
    return 0 if rep.converged else 1


# -- bench -------------------------------------------------------------------


def _bench_spec(args) -> BenchSpec:
    if args.spec:
        data = json.loads(Path(args.spec).read_text())
        return BenchSpec.from_dict(data)
    if not args.family:
        raise UsageError("bench needs --spec or --family")
    grid = [_parse_cell(c) for c in (args.grid or [])]
    names = _parse_list(args.solvers)
    if not names:
        raise UsageError("benchmark solver list is empty")
    seeds = _parse_list(args.seeds, int)
    entries = []
    for name in names:
        if name == "drsom":
            opts = drsom_options(args.mode, args.model, args.corrector, args.corrector_period, args.M_est)
            opts.pop("seed")  # each run uses its own seed
            entries.append(SolverEntry("drsom", opts, label=f"drsom-{args.mode}-{args.model}"))
        else:
            entries.append(SolverEntry(name))
    return BenchSpec(args.family, grid, entries, seeds, args.tol, args.max_iter, args.time_limit)


def cmd_bench(args) -> int:
    spec = _bench_spec(args)
    rows, aggs = run_bench(spec, workers=args.workers)
    paths = write_bench(spec, rows, aggs, args.out)
    print(f"{'cell':<28} {'solver':<24} {'conv':>6} {'k mean':>9} {'k sgm':>9} {'s sgm':>9}")
    for a in aggs:
        conv = f"{a['converged']}/{a['runs']}"
        print(
            f"{a['cell']:<28} {a['label']:<24} {conv:>6} {a['mean_iterations']:>9.1f} "
            f"{a['sgm_iterations']:>9.1f} {a['sgm_seconds']:>9.4f}"
        )
    for p in paths.values():
        print(p)
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="drsom", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an instance file")
    gen.add_argument("family", choices=FAMILIES)
    gen.add_argument("--n", type=int, help="lp: rows of A; snl: total points; classic: dimension")
    gen.add_argument("--m", type=int, help="lp: unknowns; snl: anchors")
    gen.add_argument("--r", type=float, default=0.15, help="lp: density of A")
    gen.add_argument("--p", type=float, default=0.5)
    gen.add_argument("--eps", type=float, default=0.1, help="lp: smoothing width")
    gen.add_argument("--rd", type=float, default=0.5, help="snl: radio range")
    gen.add_argument("--nf", type=float, default=0.05, help="snl: noise factor")
    gen.add_argument("--name", default="rosenbrock", help="classic: function name")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_gen)

    solve = sub.add_parser("solve", help="run one solver on one instance")
    solve.add_argument("--instance", required=True)
    solve.add_argument("--config", help="JSON file of defaults; flags win")
    solve.add_argument("--solver", choices=SOLVERS)
    solve.add_argument("--mode", choices=sorted(MODES))
    solve.add_argument("--model", choices=sorted(MODELS))
    solve.add_argument("--corrector", choices=("off", "periodic"))
    solve.add_argument("--corrector-period", dest="corrector_period", type=int)
    solve.add_argument("--M-est", dest="M_est", type=float, help="Hessian Lipschitz estimate (fixed mode)")
    solve.add_argument("--memory", type=int, help="L-BFGS memory")
    solve.add_argument("--tol", type=float)
    solve.add_argument("--max-iter", dest="max_iter", type=int)
    solve.add_argument("--seed", type=int)
    solve.add_argument("--time-limit", dest="time_limit", type=float)
    solve.add_argument("--trace", help="trace CSV path")
    solve.add_argument("--out", help="summary JSON path")
    solve.set_defaults(func=cmd_solve)

    bench = sub.add_parser("bench", help="run a grid x solvers x seeds benchmark")
    bench.add_argument("--spec", help="JSON benchmark spec (overrides the grid flags)")
    bench.add_argument("--family", choices=FAMILIES)
    bench.add_argument("--grid", action="append", help="cell as k=v,k=v; repeat for more cells")
    bench.add_argument("--solvers", default="drsom,gd")
    bench.add_argument("--seeds", default="1,2,3")
    bench.add_argument("--mode", choices=sorted(MODES), default="rf")
    bench.add_argument("--model", choices=sorted(MODELS), default="hvp")
    bench.add_argument("--corrector", choices=("off", "periodic"), default="off")
    bench.add_argument("--corrector-period", dest="corrector_period", type=int, default=1)
    bench.add_argument("--M-est", dest="M_est", type=float)
    bench.add_argument("--tol", type=float, default=1e-6)
    bench.add_argument("--max-iter", dest="max_iter", type=int, default=10_000)
    bench.add_argument("--time-limit", dest="time_limit", type=float)
    bench.add_argument("--workers", type=int, default=1)
    bench.add_argument("--out", default="bench")
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, TypeError, KeyError, OSError) as exc:
        print(f"drsom {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
