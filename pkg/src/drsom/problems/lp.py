"""Smoothed L2-Lp sparse regression: 1/2|Ax - b|^2 + lam * sum s(x_i, eps)^p.

``s(t, eps)`` equals ``|t|`` for ``|t| > eps`` and the quadratic cap
``t^2/(2 eps) + eps/2`` inside, which makes the penalty C^1. It is C^2
everywhere except on ``|t| = eps``, where the Hessian-vector product
takes the inner-branch value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..objective import Objective


@dataclass
class LpInstance:
    A: np.ndarray
    b: np.ndarray
    lam: float
    p: float
    eps: float
    seed: Optional[int] = None
    v_true: Optional[np.ndarray] = None
    r: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.lam > 0:
            raise ValueError("regularization weight must be positive")
        if not 0 < self.p < 1:
            raise ValueError("p must lie in (0, 1)")
        if not self.eps > 0:
            raise ValueError("smoothing parameter must be positive")

    @property
    def shape(self) -> tuple[int, int]:
        return self.A.shape


def lp_generate(n: int, m: int, r: float, p: float = 0.5, eps: float = 0.1, seed: int = 0) -> LpInstance:
    """Random instance with an ``n x m`` design whose entries are nonzero w.p. ``r``."""
    if not 0 < r <= 1:
        raise ValueError("sparsity r must lie in (0, 1]")
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, m))
    if r < 1:
        A *= rng.random((n, m)) < r
    v = np.where(rng.random(m) < 0.5, 0.0, rng.normal(0.0, np.sqrt(1.0 / n), size=m))
    b = A @ v + rng.standard_normal(n)
    lam = np.max(np.abs(A.T @ b)) / 5.0
    return LpInstance(A=A, b=b, lam=float(lam), p=p, eps=eps, seed=seed, v_true=v, r=r)


def smooth_abs(t: np.ndarray, eps: float) -> np.ndarray:
    a = np.abs(t)
    return np.where(a > eps, a, t * t / (2 * eps) + eps / 2)


def _penalty_derivs(t: np.ndarray, eps: float, p: float):
    """phi = s^p and its first two derivatives, elementwise."""
    outer = np.abs(t) > eps
    s = smooth_abs(t, eps)
    ds = np.where(outer, np.sign(t), t / eps)
    d2s = np.where(outer, 0.0, 1.0 / eps)
    phi = s**p
    dphi = p * s ** (p - 1) * ds
    d2phi = p * (p - 1) * s ** (p - 2) * ds**2 + p * s ** (p - 1) * d2s
    return phi, dphi, d2phi


def lp_objective(inst: LpInstance) -> Objective:
    A, b, lam, p, eps = inst.A, inst.b, inst.lam, inst.p, inst.eps

    def f(x):
        r = A @ x - b
        return float(0.5 * r @ r + lam * np.sum(smooth_abs(x, eps) ** p))

    def grad(x):
        _, dphi, _ = _penalty_derivs(x, eps, p)
        return A.T @ (A @ x - b) + lam * dphi

    def hvp(x, v):
        _, _, d2phi = _penalty_derivs(x, eps, p)
        return A.T @ (A @ v) + lam * d2phi * v

    n, m = A.shape
    return Objective(m, f, grad, hvp, name=f"lp_n{n}_m{m}", meta={"x0": np.zeros(m)})
