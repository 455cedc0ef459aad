"""Line searches along a descent direction.

Both searches evaluate through the :class:`~drsom.objective.Objective`
counters, so their cost shows up in run reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .objective import Objective

ARMIJO = "armijo_backtracking"
STRONG_WOLFE = "strong_wolfe"


@dataclass
class LineSearchSpec:
    kind: str = STRONG_WOLFE
    c1: float = 1e-4
    c2: float = 0.9
    shrink: float = 0.5
    max_evals: int = 60

    def __post_init__(self) -> None:
        if self.kind not in (ARMIJO, STRONG_WOLFE):
            raise ValueError(f"unknown line search {self.kind!r}")
        if not 0 < self.c1 < self.c2 < 1:
            raise ValueError("need 0 < c1 < c2 < 1")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink must lie in (0, 1)")


@dataclass
class LineSearchResult:
    alpha: float
    x: np.ndarray
    f: float
    g: Optional[np.ndarray]
    evals: int
    ok: bool


class _Phi:
    """phi(t) = f(x + t p) with cached gradient at the last point."""

    def __init__(self, obj: Objective, x, p):
        self.obj, self.x, self.p = obj, x, p
        self.evals = 0

    def __call__(self, t: float, need_grad: bool = True):
        self.evals += 1
        xt = self.x + t * self.p
        ft = self.obj.value(xt)
        if not need_grad or not math.isfinite(ft):
            return xt, ft, None, math.nan
        gt = self.obj.gradient(xt)
        return xt, ft, gt, float(gt @ self.p)


def armijo(obj: Objective, x, f, g, p, alpha0: float, spec: LineSearchSpec) -> LineSearchResult:
    phi = _Phi(obj, x, p)
    slope = float(g @ p)
    t = alpha0
    while phi.evals < spec.max_evals:
        xt, ft, _, _ = phi(t, need_grad=False)
        if math.isfinite(ft) and ft <= f + spec.c1 * t * slope:
            return LineSearchResult(t, xt, ft, obj.gradient(xt), phi.evals, True)
        t *= spec.shrink
    return LineSearchResult(t, x, f, g, phi.evals, False)


def _interpolate(a_lo, f_lo, d_lo, a_hi, f_hi, d_hi) -> float:
    """Cubic minimizer on [a_lo, a_hi] from two values and slopes, safeguarded."""
    lo, hi = min(a_lo, a_hi), max(a_lo, a_hi)
    if hi - lo <= 0 or not math.isfinite(f_hi):
        return 0.5 * (lo + hi)
    d1 = d_lo + d_hi - 3 * (f_lo - f_hi) / (a_lo - a_hi)
    disc = d1 * d1 - d_lo * d_hi
    if disc >= 0 and math.isfinite(disc):
        d2 = math.copysign(math.sqrt(disc), a_hi - a_lo)
        denom = d_hi - d_lo + 2 * d2
        if denom != 0:
            t = a_hi - (a_hi - a_lo) * (d_hi + d2 - d1) / denom
            width = hi - lo
            if lo + 0.1 * width <= t <= hi - 0.1 * width:
                return t
    return 0.5 * (lo + hi)


def strong_wolfe(obj: Objective, x, f, g, p, alpha0: float, spec: LineSearchSpec, alpha_max: float = 1e10) -> LineSearchResult:
    """Bracketing + zoom search for the strong Wolfe conditions."""
    phi = _Phi(obj, x, p)
    d0 = float(g @ p)
    c1, c2 = spec.c1, spec.c2
    best = None

    def ok_armijo(t, ft):
        return ft <= f + c1 * t * d0

    def zoom(a_lo, f_lo, d_lo, a_hi, f_hi, d_hi):
        nonlocal best
        while phi.evals < spec.max_evals:
            if abs(a_hi - a_lo) <= 1e-16 * max(a_lo, a_hi, 1.0):
                break
            t = _interpolate(a_lo, f_lo, d_lo, a_hi, f_hi, d_hi)
            xt, ft, gt, dt = phi(t)
            if not math.isfinite(ft) or not ok_armijo(t, ft) or ft >= f_lo:
                a_hi, f_hi, d_hi = t, ft if math.isfinite(ft) else math.inf, dt if math.isfinite(dt) else 0.0
                continue
            best = (t, xt, ft, gt)
            if abs(dt) <= -c2 * d0:
                return LineSearchResult(t, xt, ft, gt, phi.evals, True)
            if dt * (a_hi - a_lo) >= 0:
                a_hi, f_hi, d_hi = a_lo, f_lo, d_lo
            a_lo, f_lo, d_lo = t, ft, dt
        return None

    a_prev, f_prev, d_prev = 0.0, f, d0
    t = alpha0
    first = True
    while phi.evals < spec.max_evals:
        xt, ft, gt, dt = phi(t)
        if not math.isfinite(ft) or not ok_armijo(t, ft) or (not first and ft >= f_prev):
            res = zoom(a_prev, f_prev, d_prev, t, ft if math.isfinite(ft) else math.inf, dt if math.isfinite(dt) else 0.0)
            break
        best = (t, xt, ft, gt)
        if abs(dt) <= -c2 * d0:
            return LineSearchResult(t, xt, ft, gt, phi.evals, True)
        if dt >= 0:
            res = zoom(t, ft, dt, a_prev, f_prev, d_prev)
            break
        a_prev, f_prev, d_prev = t, ft, dt
        t = min(2.0 * t, alpha_max)
        first = False
    else:
        res = None
    if res is not None:
        return res
    # budget exhausted: fall back to the best sufficient-decrease point, if any
    if best is not None:
        t, xt, ft, gt = best
        return LineSearchResult(t, xt, ft, gt, phi.evals, False)
    return LineSearchResult(0.0, x, f, g, phi.evals, False)


def search(obj: Objective, x, f, g, p, alpha0: float, spec: LineSearchSpec) -> LineSearchResult:
    if spec.kind == ARMIJO:
        return armijo(obj, x, f, g, p, alpha0, spec)
    return strong_wolfe(obj, x, f, g, p, alpha0, spec)
