from .classic import (
    CLASSIC,
    HIMMELBLAU_MINIMA,
    beale,
    classic_suite,
    convex_quartic,
    himmelblau,
    ill_conditioned_quadratic,
    nonconvex_quartic,
    quadratic,
    rosenbrock,
    separable_quartic,
)
from .io import load_instance, objective_for, save_instance
from .lp import LpInstance, lp_generate, lp_objective
from .snl import SnlInstance, snl_generate, snl_objective

__all__ = [
    "CLASSIC",
    "HIMMELBLAU_MINIMA",
    "LpInstance",
    "SnlInstance",
    "beale",
    "classic_suite",
    "convex_quartic",
    "himmelblau",
    "ill_conditioned_quadratic",
    "load_instance",
    "lp_generate",
    "lp_objective",
    "nonconvex_quartic",
    "objective_for",
    "quadratic",
    "rosenbrock",
    "save_instance",
    "separable_quartic",
    "snl_generate",
    "snl_objective",
]
