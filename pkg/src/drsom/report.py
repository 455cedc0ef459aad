"""Run reports and iteration traces shared by every solver."""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, field
from typing import IO, Optional

import numpy as np

from .objective import EvalCounts

CONVERGED = "converged"
MAX_ITER = "max_iter"
STALLED = "stalled"
ERROR = "error"
TIME_LIMIT = "time_limit"
STATUSES = (CONVERGED, MAX_ITER, STALLED, ERROR, TIME_LIMIT)

TRACE_FIELDS = ("k", "f", "gnorm", "lambda_or_mu", "delta", "rho", "step_norm", "accepted")


@dataclass
class TraceRecord:
    k: int
    f: float
    gnorm: float
    lambda_or_mu: float
    delta: float
    rho: float
    step_norm: float
    accepted: bool
    # not part of the CSV schema
    model_decrease: float = math.nan
    on_boundary: bool = False
    corrected: bool = False

    def row(self) -> list:
        return [getattr(self, name) for name in TRACE_FIELDS]


@dataclass
class RunReport:
    status: str
    x_final: np.ndarray
    f_final: float
    gnorm_final: float
    iterations: int
    counts: EvalCounts
    trace: list[TraceRecord] = field(default_factory=list)
    solver: str = "drsom"
    wall_seconds: float = 0.0
    message: str = ""

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED

    def summary(self) -> dict:
        return {
            "status": self.status,
            "iterations": self.iterations,
            "f_final": self.f_final,
            "gnorm_final": self.gnorm_final,
            "n_f": self.counts.n_f,
            "n_g": self.counts.n_g,
            "n_hvp": self.counts.n_hvp,
            "wall_seconds": self.wall_seconds,
            "solver": self.solver,
        }


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_trace_csv(trace: list[TraceRecord], fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(TRACE_FIELDS)
    for rec in trace:
        w.writerow([_fmt(v) for v in rec.row()])


def read_trace_csv(fh: IO[str]) -> list[dict]:
    return list(csv.DictReader(fh))


def trace_to_dicts(trace: list[TraceRecord], full: bool = False) -> list[dict]:
    if full:
        return [asdict(r) for r in trace]
    return [dict(zip(TRACE_FIELDS, r.row())) for r in trace]


def finite_or_none(v: Optional[float]):
    if v is None or not math.isfinite(v):
        return None
    return float(v)
