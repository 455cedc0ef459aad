"""Corrector step: grow the subspace with H*d directions.

Starting from the orthonormalized span of the gradient and momentum, each
expansion appends the component of ``H d`` orthogonal to the current
basis and re-solves the trust-region model there. It stops once the
multiplier exceeds ``sqrt(eps)`` or the projected-Hessian residual
``|(I - VV')Hd|`` drops below ``C |d|^2``.

``H v`` is cached per basis column, so since ``d`` always lies in the
span, ``H d`` comes for free and each expansion costs one product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .objective import Objective, hvp
from .trs import J_MAX, solve_trs

DROP_TOL = 1e-10


def expand(V: np.ndarray, w: np.ndarray, drop_tol: float = DROP_TOL) -> tuple[np.ndarray, bool]:
    """Append ``w`` to the orthonormal columns of ``V`` (MGS, two passes).

    Returns ``(V', dependent)``; when ``w`` lies in ``span(V)`` up to
    ``drop_tol * |w|``, ``V`` is returned unchanged with ``dependent=True``.
    """
    w = np.asarray(w, dtype=float)
    nw = np.linalg.norm(w)
    if nw == 0.0:
        return V, True
    r = w.copy()
    for _ in range(2):
        for i in range(V.shape[1]):
            r -= (V[:, i] @ r) * V[:, i]
    nr = np.linalg.norm(r)
    if nr <= drop_tol * nw:
        return V, True
    return np.column_stack([V, r / nr]), False


def orthonormalize(vectors, drop_tol: float = DROP_TOL) -> np.ndarray:
    vectors = [np.asarray(v, dtype=float) for v in vectors]
    V = np.zeros((vectors[0].size, 0))
    for v in vectors:
        V, _ = expand(V, v, drop_tol)
    return V


def residual(obj: Objective, x, g_x, V: np.ndarray, d, use_exact: bool = True) -> float:
    """|(I - VV')H(x)d| for ``d`` in ``span(V)``."""
    hd = hvp(obj, x, d, g_x, use_exact=use_exact)
    return float(np.linalg.norm(hd - V @ (V.T @ hd)))


@dataclass
class CorrectorResult:
    d: np.ndarray
    lam: float
    satisfied: bool
    model_decrease: float
    dims: list[int] = field(default_factory=list)
    residuals: list[float] = field(default_factory=list)
    lams: list[float] = field(default_factory=list)
    n_hvp: int = 0

    @property
    def n_expansions(self) -> int:
        return len(self.dims) - 1


def _model_decrease(Q, c, a) -> float:
    return float(-(c @ a + 0.5 * a @ Q @ a))


def corrector_step(
    obj: Objective,
    x,
    f_x: float,
    g_x,
    d_init,
    radius: float,
    eps: float,
    C: float,
    j_max: int = J_MAX,
    momentum=None,
    lam_init: float = 0.0,
    use_exact: bool = True,
    basis_hv: Optional[tuple[list, list]] = None,
) -> CorrectorResult:
    """Expand the subspace around the incumbent step ``d_init``.

    ``momentum`` is the previous step (omit on the first iteration).
    ``basis_hv`` optionally supplies ``(basis, [H b for b in basis])``
    already computed for the 2-D model, avoiding the initial products.
    """
    g_x = np.asarray(g_x, dtype=float)
    n = g_x.size
    cap = min(j_max, n)
    sqrt_eps = np.sqrt(eps)

    starts = [g_x] if momentum is None or not np.linalg.norm(momentum) > 0 else [g_x, momentum]
    V = orthonormalize(starts)
    n_hvp = 0
    if basis_hv is not None:
        B = np.column_stack(basis_hv[0])
        HB = np.column_stack(basis_hv[1])
        # V = B T  =>  HV = HB T, with T solving B T = V in the least-squares sense
        T, *_ = np.linalg.lstsq(B, V, rcond=None)
        HV = HB @ T
    else:
        cols = []
        for i in range(V.shape[1]):
            cols.append(hvp(obj, x, V[:, i], g_x, use_exact=use_exact))
            n_hvp += 1
        HV = np.column_stack(cols)

    d = np.asarray(d_init, dtype=float)
    a = V.T @ d
    Q = V.T @ HV
    Q = 0.5 * (Q + Q.T)
    c = V.T @ g_x
    hd = HV @ a
    res = float(np.linalg.norm(hd - V @ (V.T @ hd)))
    lam = float(lam_init)
    out = CorrectorResult(d=d, lam=lam, satisfied=False, model_decrease=_model_decrease(Q, c, a), n_hvp=n_hvp)
    out.dims.append(V.shape[1])
    out.residuals.append(res)
    out.lams.append(lam)
    if lam > sqrt_eps or res <= C * (d @ d):
        out.satisfied = True
        return out

    while V.shape[1] < cap:
        V, dependent = expand(V, hd)
        if dependent:
            break
        HV = np.column_stack([HV, hvp(obj, x, V[:, -1], g_x, use_exact=use_exact)])
        out.n_hvp += 1
        Q = V.T @ HV
        Q = 0.5 * (Q + Q.T)
        c = V.T @ g_x
        sol = solve_trs(Q, c, np.eye(V.shape[1]), radius, j_max=max(j_max, V.shape[1]))
        a = sol.alpha
        d = V @ a
        hd = HV @ a
        res = float(np.linalg.norm(hd - V @ (V.T @ hd)))
        out.d, out.lam, out.model_decrease = d, sol.lam, sol.model_decrease
        out.dims.append(V.shape[1])
        out.residuals.append(res)
        out.lams.append(sol.lam)
        if sol.lam > sqrt_eps or res <= C * (d @ d):
            out.satisfied = True
            return out
    return out
