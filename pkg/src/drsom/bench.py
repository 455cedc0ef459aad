"""Benchmark matrices: problem grid x solvers x seeds, with aggregate rows."""

from __future__ import annotations

import csv
import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .baselines import BASELINES
from .objective import Objective
from .problems.io import classic_objective, digest, instance_to_dict, objective_for
from .problems.lp import lp_generate
from .problems.snl import snl_generate
from .report import RunReport, finite_or_none
from .solver import SolverConfig, minimize

FAMILIES = ("lp", "snl", "classic")
SOLVERS = ("drsom",) + tuple(BASELINES)

ITER_SHIFT = 50.0
TIME_SHIFT = 1.0

RUN_FIELDS = (
    "family",
    "cell",
    "solver",
    "label",
    "seed",
    "status",
    "iterations",
    "f_final",
    "gnorm_final",
    "n_f",
    "n_g",
    "n_hvp",
    "wall_seconds",
    "config_digest",
    "instance_digest",
)
AGG_FIELDS = (
    "family",
    "cell",
    "label",
    "runs",
    "converged",
    "mean_iterations",
    "sgm_iterations",
    "mean_seconds",
    "sgm_seconds",
)


@dataclass
class SolverEntry:
    """One solver column of the table.

    ``options`` holds :class:`SolverConfig` fields for DRSOM and keyword
    arguments (e.g. ``memory``) for the baselines.
    """

    solver: str
    options: dict = field(default_factory=dict)
    label: Optional[str] = None

    def __post_init__(self) -> None:
        if self.solver not in SOLVERS:
            raise ValueError(f"unknown solver {self.solver!r}; expected one of {SOLVERS}")
        if self.label is None:
            self.label = self.solver


@dataclass
class BenchSpec:
    family: str
    grid: list
    solvers: list
    seeds: list
    tol_g: float = 1e-6
    max_iter: int = 10_000
    time_limit: Optional[float] = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        self.solvers = [s if isinstance(s, SolverEntry) else SolverEntry(**s) for s in self.solvers]
        if not self.grid:
            raise ValueError("benchmark grid is empty")
        if not self.solvers:
            raise ValueError("benchmark solver list is empty")
        if not self.seeds:
            raise ValueError("benchmark seed list is empty")
        labels = [s.label for s in self.solvers]
        if len(set(labels)) != len(labels):
            raise ValueError("solver labels must be unique")
        if not self.tol_g > 0 or self.max_iter < 1:
            raise ValueError("need tol_g > 0 and max_iter >= 1")
        if self.time_limit is not None and not self.time_limit > 0:
            raise ValueError("time_limit must be positive")

    @classmethod
    def from_dict(cls, data: dict) -> "BenchSpec":
        return cls(**data)


def generate(family: str, params: dict, seed: int):
    """Build an instance; classic instances are plain parameter dicts."""
    params = dict(params)
    if family == "lp":
        return lp_generate(seed=seed, **params)
    if family == "snl":
        if "rd" in params:
            params["radio_range"] = params.pop("rd")
        if "nf" in params:
            params["noise"] = params.pop("nf")
        return snl_generate(seed=seed, **params)
    if family == "classic":
        if "name" not in params:
            raise ValueError("classic instances need a 'name'")
        inst = {"kind": "classic", "params": params}
        classic_objective(params)  # fail early on bad names or arguments
        return inst
    raise ValueError(f"unknown family {family!r}")


def starting_point(obj: Objective) -> np.ndarray:
    x0 = obj.meta.get("x0")
    return np.zeros(obj.dim) if x0 is None else np.array(x0, dtype=float)


def config_digest(solver: str, options: dict, tol_g: float, max_iter: int) -> str:
    if solver == "drsom":
        return drsom_config(options, tol_g, max_iter).digest()
    blob = json.dumps({"solver": solver, "tol_g": tol_g, "max_iter": max_iter, **options}, sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def drsom_config(options: dict, tol_g: float, max_iter: int, time_limit: Optional[float] = None) -> SolverConfig:
    opts = {k: v for k, v in options.items() if k not in ("tol_g", "max_iter", "time_limit")}
    return SolverConfig(tol_g=tol_g, max_iter=max_iter, time_limit=time_limit, **opts)


def run_solver(
    solver: str,
    obj: Objective,
    x0,
    tol_g: float,
    max_iter: int,
    options: Optional[dict] = None,
    time_limit: Optional[float] = None,
) -> RunReport:
    options = dict(options or {})
    if solver == "drsom":
        return minimize(obj, x0, drsom_config(options, tol_g, max_iter, time_limit))
    if solver not in BASELINES:
        raise ValueError(f"unknown solver {solver!r}")
    return BASELINES[solver](obj, x0, tol_g=tol_g, max_iter=max_iter, time_limit=time_limit, **options)


def cell_label(params: dict) -> str:
    return ";".join(f"{k}={params[k]}" for k in sorted(params))


def summary_row(report: RunReport) -> dict:
    s = report.summary()
    s["f_final"] = finite_or_none(s["f_final"])
    s["gnorm_final"] = finite_or_none(s["gnorm_final"])
    return s


def _one(spec: BenchSpec, params: dict, entry: SolverEntry, seed: int) -> dict:
    inst = generate(spec.family, params, seed)
    obj = objective_for(inst)
    options = dict(entry.options)
    if entry.solver == "drsom":
        options.setdefault("seed", seed)
    rep = run_solver(entry.solver, obj, starting_point(obj), spec.tol_g, spec.max_iter, options, spec.time_limit)
    row = {
        "family": spec.family,
        "cell": cell_label(params),
        "solver": entry.solver,
        "label": entry.label,
        "seed": seed,
        **summary_row(rep),
        "config_digest": config_digest(entry.solver, options, spec.tol_g, spec.max_iter),
        "instance_digest": digest(instance_to_dict(inst)),
    }
    return row


def shifted_geomean(values, shift: float) -> float:
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return math.nan
    return float(np.exp(np.mean(np.log(v + shift))) - shift)


def aggregate(rows: list[dict]) -> list[dict]:
    groups: dict = {}
    for r in rows:
        groups.setdefault((r["family"], r["cell"], r["label"]), []).append(r)
    out = []
    for (family, cell, label), rs in sorted(groups.items()):
        its = [r["iterations"] for r in rs]
        secs = [r["wall_seconds"] for r in rs]
        out.append(
            {
                "family": family,
                "cell": cell,
                "label": label,
                "runs": len(rs),
                "converged": sum(r["status"] == "converged" for r in rs),
                "mean_iterations": float(np.mean(its)),
                "sgm_iterations": shifted_geomean(its, ITER_SHIFT),
                "mean_seconds": float(np.mean(secs)),
                "sgm_seconds": shifted_geomean(secs, TIME_SHIFT),
            }
        )
    return out


def _sort_key(row: dict):
    return (row["cell"], row["label"], row["seed"])


def run_bench(spec: BenchSpec, workers: int = 1) -> tuple[list[dict], list[dict]]:
    """Run every (cell, solver, seed) combination; rows come back sorted."""
    jobs = [(p, e, s) for p in spec.grid for e in spec.solvers for s in spec.seeds]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda j: _one(spec, *j), jobs))
    else:
        rows = [_one(spec, *j) for j in jobs]
    rows.sort(key=_sort_key)
    return rows, aggregate(rows)


def _csv_value(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return v


def write_csv(rows: list[dict], fields, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(fields), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _csv_value(r[k]) for k in fields})


def bench_document(spec: BenchSpec, rows: list[dict], aggregates: list[dict]) -> dict:
    return {
        "family": spec.family,
        "grid": spec.grid,
        "solvers": [{"solver": e.solver, "label": e.label, "options": e.options} for e in spec.solvers],
        "seeds": list(spec.seeds),
        "tol_g": spec.tol_g,
        "max_iter": spec.max_iter,
        "time_limit": spec.time_limit,
        "shifts": {"iterations": ITER_SHIFT, "seconds": TIME_SHIFT},
        "line_search": "strong Wolfe (bracketing + cubic zoom)",
        "runs": rows,
        "aggregates": aggregates,
    }


def write_bench(spec: BenchSpec, rows: list[dict], aggregates: list[dict], prefix) -> dict[str, Path]:
    """Write ``<prefix>.csv`` (runs), ``<prefix>_agg.csv`` and ``<prefix>.json``."""
    prefix = Path(prefix)
    paths = {
        "runs": prefix.with_name(prefix.name + ".csv"),
        "aggregates": prefix.with_name(prefix.name + "_agg.csv"),
        "json": prefix.with_name(prefix.name + ".json"),
    }
    write_csv(rows, RUN_FIELDS, paths["runs"])
    write_csv(aggregates, AGG_FIELDS, paths["aggregates"])
    paths["json"].write_text(json.dumps(bench_document(spec, rows, aggregates), indent=1, default=str))
    return paths
