"""Objective wrapper with evaluation accounting and Hessian-vector products."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

Vector = np.ndarray


class DegenerateDirection(ValueError):
    pass


@dataclass
class EvalCounts:
    n_f: int = 0
    n_g: int = 0
    n_hvp: int = 0

    def reset(self) -> None:
        self.n_f = self.n_g = self.n_hvp = 0

    def snapshot(self) -> "EvalCounts":
        return EvalCounts(self.n_f, self.n_g, self.n_hvp)


@dataclass
class Objective:
    """A smooth function on R^n.

    ``f`` and ``grad`` are required; ``hvp`` is an optional exact
    Hessian-vector product ``(x, v) -> H(x) v``. Every call through
    :meth:`value`, :meth:`gradient` and :meth:`hvp_exact` is counted, so
    solvers sharing an instance report comparable costs. One instance
    should not be shared between concurrently running solvers.
    """

    dim: int
    f: Callable[[Vector], float]
    grad: Callable[[Vector], Vector]
    hvp: Optional[Callable[[Vector, Vector], Vector]] = None
    name: str = "objective"
    meta: dict[str, Any] = field(default_factory=dict)
    counts: EvalCounts = field(default_factory=EvalCounts)

    def __post_init__(self) -> None:
        if self.dim <= 0:
            raise ValueError("dim must be positive")

    @property
    def has_exact_hvp(self) -> bool:
        return self.hvp is not None

    def value(self, x: Vector) -> float:
        self.counts.n_f += 1
        return float(self.f(x))

    def gradient(self, x: Vector) -> Vector:
        self.counts.n_g += 1
        return np.asarray(self.grad(x), dtype=float)

    def hvp_exact(self, x: Vector, v: Vector) -> Vector:
        if self.hvp is None:
            raise RuntimeError(f"{self.name} has no exact Hessian-vector product")
        self.counts.n_hvp += 1
        return np.asarray(self.hvp(x, v), dtype=float)

    def reset_counts(self) -> None:
        self.counts.reset()


def fd_step(x: Vector, v: Vector) -> float:
    """Forward-difference displacement 2*sqrt(u)*(1+|x|)/|v|."""
    u = np.finfo(np.result_type(x, v, float)).eps
    return 2.0 * np.sqrt(u) * (1.0 + np.linalg.norm(x)) / np.linalg.norm(v)


def hvp_fd(obj: Objective, x: Vector, v: Vector, g_x: Vector) -> Vector:
    """Forward-difference Hessian-vector product; costs one gradient."""
    if not np.linalg.norm(v) > 0:
        raise DegenerateDirection("degenerate direction")
    h = fd_step(x, v)
    return (obj.gradient(x + h * v) - g_x) / h


def hvp(obj: Objective, x: Vector, v: Vector, g_x: Vector, use_exact: bool = True) -> Vector:
    """H(x) v through the exact callback when available, else finite differences."""
    if use_exact and obj.has_exact_hvp:
        return obj.hvp_exact(x, v)
    return hvp_fd(obj, x, v, g_x)


def fd_gradient(obj: Objective, x: Vector, rel_step: float = 1e-6) -> Vector:
    """Central-difference gradient. Uncounted; meant for verification only."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    for i in range(x.size):
        h = rel_step * max(1.0, abs(x[i]))
        e = np.zeros_like(x)
        e[i] = h
        out[i] = (obj.f(x + e) - obj.f(x - e)) / (2 * h)
    return out
