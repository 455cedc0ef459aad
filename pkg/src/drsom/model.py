"""Quadratic models of f over span{-g, d}."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .objective import Objective, hvp

HVP_EXACT = "hvp_exact"
HVP_FD = "hvp_fd"
INTERPOLATION = "interpolation"
METHODS = (HVP_EXACT, HVP_FD, INTERPOLATION)

GRAM_RANK_RTOL = 1e-10
INTERP_COND_MAX = 1e8
INTERP_RETRIES = 5


class ModelError(RuntimeError):
    pass


@dataclass
class ModelMethod:
    tag: str = INTERPOLATION
    interp_samples: int = 3
    interp_scale: float = 1.0
    # sample so the probe steps have x-space length min(interp_scale, radius);
    # off = unit circle in stepsize space
    interp_scale_by_radius: bool = False

    def __post_init__(self) -> None:
        if self.tag not in METHODS:
            raise ValueError(f"unknown model method {self.tag!r}; expected one of {METHODS}")
        if self.interp_samples < 3:
            raise ValueError("interpolation needs at least 3 samples")
        if not self.interp_scale > 0:
            raise ValueError("interp_scale must be positive")


@dataclass
class QuadModel:
    """m(a) = f0 + c'a + 1/2 a'Qa for the step sum_i a_i * basis[i]."""

    Q: np.ndarray
    c: np.ndarray
    G: np.ndarray
    f0: float
    basis: list[np.ndarray]
    gram_rank: int = 0
    # H @ basis[i], when the model was built from products (reused by the corrector)
    hb: Optional[list[np.ndarray]] = field(default=None, repr=False)

    @property
    def j(self) -> int:
        return self.c.size

    def value(self, alpha: np.ndarray) -> float:
        return float(self.f0 + self.c @ alpha + 0.5 * alpha @ self.Q @ alpha)

    def decrease(self, alpha: np.ndarray) -> float:
        """m(0) - m(alpha)."""
        return float(-(self.c @ alpha + 0.5 * alpha @ self.Q @ alpha))

    def step(self, alpha: np.ndarray) -> np.ndarray:
        out = alpha[0] * self.basis[0]
        for a, b in zip(alpha[1:], self.basis[1:]):
            out = out + a * b
        return out


def _basis(g: np.ndarray, d: np.ndarray) -> list[np.ndarray]:
    if not np.linalg.norm(g) > 0:
        raise ModelError("model build failed: zero gradient")
    if np.linalg.norm(d) > 0:
        return [-g, d]
    return [-g]


def _gram_rank(G: np.ndarray) -> int:
    s = np.linalg.eigvalsh(G)
    return int(np.sum(s > GRAM_RANK_RTOL * max(s[-1], 0.0)))


def _finish(Q, c, G, f0, basis, hb=None) -> QuadModel:
    Q = 0.5 * (Q + Q.T)
    G = 0.5 * (G + G.T)
    if not (np.all(np.isfinite(Q)) and np.all(np.isfinite(c)) and np.all(np.isfinite(G))):
        raise ModelError("model build failed: non-finite entries")
    return QuadModel(Q=Q, c=c, G=G, f0=float(f0), basis=basis, gram_rank=_gram_rank(G), hb=hb)


def build_hvp(obj: Objective, x, g, d, f_x: float = np.nan, use_exact: bool = True) -> QuadModel:
    """Q = B'HB, c = B'g, G = B'B with B = [-g, d] (or [-g] when d = 0)."""
    basis = _basis(g, d)
    B = np.column_stack(basis)
    # H(-g) = -(Hg): one product per column
    hb = [-hvp(obj, x, g, g, use_exact=use_exact)]
    if len(basis) == 2:
        hb.append(hvp(obj, x, d, g, use_exact=use_exact))
    HB = np.column_stack(hb)
    return _finish(B.T @ HB, B.T @ g, B.T @ B, f_x, basis, hb)


def _monomials(betas: np.ndarray) -> np.ndarray:
    if betas.shape[1] == 1:
        return 0.5 * betas**2
    b1, b2 = betas[:, 0], betas[:, 1]
    return np.column_stack([0.5 * b1**2, b1 * b2, 0.5 * b2**2])


def _sample_betas(rng: np.random.Generator, ell: int, j: int, scale: float) -> np.ndarray:
    if j == 1:
        return scale * rng.choice([-1.0, 1.0], size=(ell, 1)) * rng.uniform(0.5, 1.0, size=(ell, 1))
    theta = rng.uniform(0.0, 2 * np.pi, size=ell)
    return scale * np.column_stack([np.cos(theta), np.sin(theta)])


def build_interp(
    obj: Objective,
    x,
    g,
    d,
    f_x: float,
    ell: int = 3,
    scale: float = 1.0,
    rng: Optional[np.random.Generator] = None,
    betas: Optional[Sequence[Sequence[float]]] = None,
    gram_scale: bool = False,
) -> QuadModel:
    """Fit Q from ``ell`` extra function values along sampled stepsizes.

    With ``betas`` given, those stepsizes are used as-is (no resampling).
    Otherwise they are drawn on the circle of radius ``scale``, or, with
    ``gram_scale``, on the ellipse ``|B beta| = scale`` so every probe moves
    exactly ``scale`` in x.
    """
    if ell < 3:
        raise ValueError("interpolation needs at least 3 samples")
    basis = _basis(g, d)
    B = np.column_stack(basis)
    c = B.T @ g
    G = B.T @ B
    j = len(basis)
    rng = rng if rng is not None else np.random.default_rng()

    for attempt in range(INTERP_RETRIES + 1):
        if betas is not None:
            bs = np.atleast_2d(np.asarray(betas, dtype=float))[:, :j]
        else:
            bs = _sample_betas(rng, ell, j, 1.0 if gram_scale else scale)
            if gram_scale:
                bs = bs * (scale / np.sqrt(np.einsum("ij,jk,ik->i", bs, G, bs)))[:, None]
        P = _monomials(bs)
        if betas is None and np.linalg.cond(P) > INTERP_COND_MAX:
            continue
        rhs = np.array([obj.value(x + B @ b) for b in bs]) - f_x - bs @ c
        q, *_ = np.linalg.lstsq(P, rhs, rcond=None)
        if j == 1:
            Q = np.array([[q[0]]])
        else:
            Q = np.array([[q[0], q[1]], [q[1], q[2]]])
        return _finish(Q, c, G, f_x, basis)
    raise ModelError("interpolation degenerate")


def build_model(
    obj: Objective,
    method: ModelMethod,
    x,
    g,
    d,
    f_x: float,
    rng: Optional[np.random.Generator] = None,
    radius: Optional[float] = None,
) -> QuadModel:
    if method.tag == INTERPOLATION:
        if method.interp_scale_by_radius and radius is not None and radius > 0:
            scale = min(method.interp_scale, radius)
            return build_interp(obj, x, g, d, f_x, method.interp_samples, scale, rng, gram_scale=True)
        return build_interp(obj, x, g, d, f_x, method.interp_samples, method.interp_scale, rng)
    return build_hvp(obj, x, g, d, f_x, use_exact=method.tag == HVP_EXACT)
