"""Dimension-reduced second-order optimization (DRSOM) and a benchmark harness."""

from .baselines import cg_minimize, gd_minimize, lbfgs_minimize
from .corrector import corrector_step
from .model import ModelMethod, QuadModel, build_hvp, build_interp
from .objective import EvalCounts, Objective, hvp, hvp_fd
from .report import RunReport, TraceRecord
from .solver import CorrectorConfig, SolverConfig, SolverState, minimize, step
from .trs import TrsSolution, solve_regularized, solve_trs, subspace_eigs

__version__ = "0.1.0"

__all__ = [
    "CorrectorConfig",
    "EvalCounts",
    "ModelMethod",
    "Objective",
    "QuadModel",
    "RunReport",
    "SolverConfig",
    "SolverState",
    "TraceRecord",
    "TrsSolution",
    "build_hvp",
    "build_interp",
    "cg_minimize",
    "corrector_step",
    "gd_minimize",
    "hvp",
    "hvp_fd",
    "lbfgs_minimize",
    "minimize",
    "solve_regularized",
    "solve_trs",
    "step",
    "subspace_eigs",
]
