"""Line-search baselines: gradient descent, nonlinear CG (PR+), L-BFGS."""

from __future__ import annotations

import math
import time
from collections import deque
from typing import Callable, Optional

import numpy as np

from .linesearch import LineSearchSpec, search
from .objective import Objective
from .report import CONVERGED, MAX_ITER, STALLED, TIME_LIMIT, RunReport, TraceRecord


def _initial_alpha(k: int, f: float, f_prev: float, slope: float, gnorm: float, unit_after_first: bool) -> float:
    if k == 0:
        return min(1.0, 1.0 / gnorm)
    if unit_after_first:
        return 1.0
    # quadratic interpolation on the previous decrease
    a = 1.01 * 2.0 * (f - f_prev) / slope
    return a if a > 0 and math.isfinite(a) else 1.0


def _run(
    name: str,
    obj: Objective,
    x0,
    tol_g: float,
    max_iter: int,
    ls: LineSearchSpec,
    direction: Callable,
    unit_step: bool,
    on_step: Optional[Callable] = None,
    time_limit: Optional[float] = None,
    callback: Optional[Callable] = None,
) -> RunReport:
    obj.reset_counts()
    t0 = time.perf_counter()
    x = np.array(x0, dtype=float)
    f = obj.value(x)
    g = obj.gradient(x)
    f_prev = math.nan
    trace: list[TraceRecord] = []
    status, message = MAX_ITER, ""
    k = 0
    p_prev = None
    while True:
        gnorm = float(np.linalg.norm(g))
        if gnorm <= tol_g:
            status = CONVERGED
            break
        if k >= max_iter:
            break
        if time_limit is not None and time.perf_counter() - t0 > time_limit:
            status = TIME_LIMIT
            break
        p = direction(k, g, p_prev)
        slope = float(g @ p)
        if not slope < 0:
            # restart on loss of descent
            p = -g
            slope = -gnorm**2
        alpha0 = _initial_alpha(k, f, f_prev, slope, gnorm, unit_step)
        res = search(obj, x, f, g, p, alpha0, ls)
        if not res.ok or not res.f < f:
            status, message = STALLED, "line search failed"
            trace.append(TraceRecord(k, f, gnorm, math.nan, res.alpha, math.nan, 0.0, False))
            k += 1
            break
        s = res.x - x
        trace.append(TraceRecord(k, f, gnorm, math.nan, res.alpha, math.nan, float(np.linalg.norm(s)), True))
        if on_step is not None:
            on_step(s, res.g - g)
        f_prev, x, f, g = f, res.x, res.f, res.g
        p_prev = p
        k += 1
        if callback is not None:
            callback(x)
    return RunReport(
        status=status,
        x_final=x,
        f_final=f,
        gnorm_final=float(np.linalg.norm(g)),
        iterations=len(trace),
        counts=obj.counts.snapshot(),
        trace=trace,
        solver=name,
        wall_seconds=time.perf_counter() - t0,
        message=message,
    )


def gd_minimize(obj: Objective, x0, tol_g: float = 1e-6, max_iter: int = 10_000, ls: Optional[LineSearchSpec] = None, **kw) -> RunReport:
    """Steepest descent with a line search."""
    ls = ls or LineSearchSpec(c2=0.9)
    return _run("gd", obj, x0, tol_g, max_iter, ls, lambda k, g, p: -g, unit_step=False, **kw)


def cg_minimize(obj: Objective, x0, tol_g: float = 1e-6, max_iter: int = 10_000, ls: Optional[LineSearchSpec] = None, **kw) -> RunReport:
    """Polak-Ribiere+ nonlinear conjugate gradient."""
    ls = ls or LineSearchSpec(c2=0.1)
    g_prev = [None]

    def direction(k, g, p_prev):
        gp = g_prev[0]
        g_prev[0] = g
        if gp is None or p_prev is None:
            return -g
        beta = max(0.0, float(g @ (g - gp)) / float(gp @ gp))
        return -g + beta * p_prev

    return _run("cg", obj, x0, tol_g, max_iter, ls, direction, unit_step=False, **kw)


def lbfgs_minimize(
    obj: Objective,
    x0,
    tol_g: float = 1e-6,
    max_iter: int = 10_000,
    memory: int = 10,
    ls: Optional[LineSearchSpec] = None,
    **kw,
) -> RunReport:
    """Limited-memory BFGS (two-loop recursion).

    Curvature pairs with ``s'y <= 1e-12 |s||y|`` are skipped. With
    ``memory=0`` the direction is plain ``-g`` and the method reduces to
    gradient descent with the same initial-step rule.
    """
    ls = ls or LineSearchSpec(c2=0.9)
    pairs: deque = deque(maxlen=max(memory, 0) or None)

    def on_step(s, y):
        if memory > 0 and s @ y > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
            pairs.append((s, y, 1.0 / float(s @ y)))

    def direction(k, g, p_prev):
        if memory == 0 or not pairs:
            return -g
        q = g.copy()
        alphas = []
        for s, y, rho in reversed(pairs):
            a = rho * float(s @ q)
            alphas.append(a)
            q -= a * y
        s, y, _ = pairs[-1]
        q *= float(s @ y) / float(y @ y)
        for (s, y, rho), a in zip(pairs, reversed(alphas)):
            b = rho * float(y @ q)
            q += (a - b) * s
        return -q

    return _run("lbfgs", obj, x0, tol_g, max_iter, ls, direction, unit_step=memory > 0, on_step=on_step, **kw)


BASELINES = {"gd": gd_minimize, "cg": cg_minimize, "lbfgs": lbfgs_minimize}
