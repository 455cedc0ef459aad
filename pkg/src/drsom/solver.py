"""DRSOM: trust-region steps in the span of the gradient and momentum.

Each iteration builds a 2-D quadratic model of ``f`` over
``x - a1*g + a2*d`` (``d`` is the previous accepted step), solves either
the G-norm trust-region subproblem or its regularized "radius-free"
counterpart, and accepts or rejects the step by the usual reduction ratio.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .corrector import corrector_step
from .model import HVP_EXACT, INTERPOLATION, ModelError, ModelMethod, QuadModel, build_model
from .objective import Objective
from .report import CONVERGED, ERROR, MAX_ITER, STALLED, TIME_LIMIT, RunReport, TraceRecord
from .trs import TrsError, solve_regularized, solve_trs, subspace_eigs

TRUST_RADIUS = "trust_radius"
RADIUS_FREE = "radius_free"
FIXED_RADIUS = "fixed_radius"
MODES = (TRUST_RADIUS, RADIUS_FREE, FIXED_RADIUS)


@dataclass
class CorrectorConfig:
    period: int = 1
    C: float = 1e2
    j_max: int = 50

    def __post_init__(self) -> None:
        if self.period < 1 or self.j_max < 2 or not self.C > 0:
            raise ValueError("corrector needs period >= 1, j_max >= 2, C > 0")


@dataclass
class SolverConfig:
    mode: str = RADIUS_FREE
    model: ModelMethod = field(default_factory=ModelMethod)
    tol_g: float = 1e-6
    max_iter: int = 10_000
    eta: float = 0.09
    zeta1: float = 0.25
    zeta2: float = 0.75
    beta1: float = 0.5
    beta2: float = 2.0
    gamma0: float = 1e-3
    gamma_min: float = 1e-12
    mu_M: float = 1e3
    delta0: float = 1.0
    delta_max: float = 1e12
    M_est: Optional[float] = None
    corrector: Optional[CorrectorConfig] = None
    max_rejections: int = 50
    seed: int = 0
    time_limit: Optional[float] = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if isinstance(self.model, dict):
            self.model = ModelMethod(**self.model)
        if isinstance(self.corrector, dict):
            self.corrector = CorrectorConfig(**self.corrector)
        if not self.beta1 < 1 < self.beta2:
            raise ValueError("need beta1 < 1 < beta2")
        if not (0 <= self.eta < self.zeta1 < self.zeta2 <= 1):
            raise ValueError("need 0 <= eta < zeta1 < zeta2 <= 1")
        if not (self.tol_g > 0 and self.delta0 > 0 and self.delta_max > 0 and self.gamma_min > 0):
            raise ValueError("tolerances and radii must be positive")
        if self.mode == FIXED_RADIUS and not (self.M_est is not None and self.M_est > 0):
            raise ValueError("fixed_radius mode needs M_est > 0")

    @property
    def fixed_delta(self) -> float:
        return 2.0 * math.sqrt(self.tol_g) / self.M_est

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SolverConfig":
        return cls(**data)

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class SolverState:
    x: np.ndarray
    f: float
    g: np.ndarray
    d: np.ndarray
    delta: float
    gamma: float
    mu: float = math.nan
    k: int = 0
    last_rho: float = math.nan
    last_lam: float = math.nan
    rejections: int = 0
    last_corrector_k: int = -(10**9)
    model: Optional[QuadModel] = None
    record: Optional[TraceRecord] = None

    @property
    def gnorm(self) -> float:
        return float(np.linalg.norm(self.g))


def initial_state(obj: Objective, x0, config: SolverConfig) -> SolverState:
    x = np.array(x0, dtype=float)
    if x.shape != (obj.dim,):
        raise ValueError(f"x0 has shape {x.shape}, expected ({obj.dim},)")
    f = obj.value(x)
    if not math.isfinite(f):
        raise ValueError("f(x0) is not finite")
    g = obj.gradient(x)
    delta = config.fixed_delta if config.mode == FIXED_RADIUS else config.delta0
    return SolverState(x=x, f=f, g=g, d=np.zeros_like(x), delta=delta, gamma=config.gamma0)


def _radius_free_mu(model: QuadModel, gamma: float, mu_M: float) -> float:
    eigs = subspace_eigs(model.Q, model.G)
    mu1, mu2 = eigs[0], eigs[-1]
    lower = max(0.0, -mu1)
    upper = max(lower, mu2) + mu_M
    return float(gamma * upper + max(1.0 - gamma, 0.0) * lower)


def step(
    obj: Objective,
    state: SolverState,
    config: SolverConfig,
    rng: Optional[np.random.Generator] = None,
) -> tuple[SolverState, bool]:
    """Run one DRSOM iteration, updating ``state`` in place.

    The iteration's trace record is left in ``state.record``.
    """
    if rng is None:
        rng = np.random.default_rng(config.seed)
    method = config.model
    if config.mode != RADIUS_FREE:
        radius_for_model = state.delta
    else:
        radius_for_model = float(np.linalg.norm(state.d)) or None
    rescale = method.tag == INTERPOLATION and method.interp_scale_by_radius and config.mode != RADIUS_FREE
    if state.model is None or rescale:
        state.model = build_model(obj, method, state.x, state.g, state.d, state.f, rng, radius_for_model)
    m = state.model

    on_boundary = False
    if config.mode == RADIUS_FREE:
        state.mu = _radius_free_mu(m, state.gamma, config.mu_M)
        alpha = solve_regularized(m.Q, m.c, m.G, state.mu)
        dec = m.decrease(alpha)
        # the penalty mu*|a|_G^2 acts like a trust-region multiplier of 2*mu
        lam = 2.0 * state.mu
    else:
        sol = solve_trs(m.Q, m.c, m.G, state.delta)
        alpha, dec, lam, on_boundary = sol.alpha, sol.model_decrease, sol.lam, sol.on_boundary
    trial = m.step(alpha)

    corrected = False
    cc = config.corrector
    if cc is not None and lam <= math.sqrt(config.tol_g) and state.k - state.last_corrector_k >= cc.period:
        radius = state.delta if config.mode != RADIUS_FREE else float(np.linalg.norm(trial))
        if radius > 0:
            has_d = np.linalg.norm(state.d) > 0
            res = corrector_step(
                obj, state.x, state.f, state.g, trial, radius, config.tol_g, cc.C, cc.j_max,
                momentum=state.d if has_d else None,
                lam_init=lam,
                use_exact=method.tag == HVP_EXACT,
                basis_hv=(m.basis, m.hb) if m.hb is not None else None,
            )
            state.last_corrector_k = state.k
            if res.n_expansions > 0:
                trial, lam, dec = res.d, res.lam, res.model_decrease
                on_boundary = config.mode != RADIUS_FREE and lam > 0
                corrected = True

    step_norm = float(np.linalg.norm(trial))
    rho = math.nan
    accepted = False
    if dec > 0 and math.isfinite(dec):
        x_new = state.x + trial
        f_new = obj.value(x_new)
        if math.isfinite(f_new):
            rho = (state.f - f_new) / dec
            accepted = config.mode == FIXED_RADIUS or rho > config.eta
    elif config.mode == FIXED_RADIUS:
        raise ModelError("degenerate model decrease in fixed_radius mode")

    record = TraceRecord(
        k=state.k,
        f=state.f,
        gnorm=state.gnorm,
        lambda_or_mu=state.mu if config.mode == RADIUS_FREE else lam,
        delta=state.delta if config.mode != RADIUS_FREE else math.nan,
        rho=rho,
        step_norm=step_norm,
        accepted=accepted,
        model_decrease=dec,
        on_boundary=on_boundary,
        corrected=corrected,
    )

    if accepted:
        # stored as the realized difference so d == x_k - x_{k-1} exactly
        state.d = x_new - state.x
        state.x = x_new
        state.f = f_new
        state.g = obj.gradient(x_new)
        state.model = None
        state.rejections = 0
    else:
        state.rejections += 1

    # degenerate or non-finite trials count as the worst possible ratio
    r = rho if math.isfinite(rho) else -math.inf
    if config.mode == TRUST_RADIUS:
        if r < config.zeta1:
            # shrink from the step actually taken, not a possibly inflated radius
            state.delta = config.beta1 * min(state.delta, step_norm) if step_norm > 0 else config.beta1 * state.delta
        elif r > config.zeta2:
            state.delta = min(config.beta2 * state.delta, config.delta_max)
    elif config.mode == RADIUS_FREE:
        if r <= config.zeta1:
            state.gamma *= config.beta2
        elif r > config.zeta2:
            state.gamma = max(config.gamma_min, min(math.sqrt(state.gamma), config.beta1 * state.gamma))

    state.last_rho = rho
    state.last_lam = lam
    state.k += 1
    state.record = record
    return state, accepted


def minimize(
    obj: Objective,
    x0,
    config: Optional[SolverConfig] = None,
    callback: Optional[Callable[[SolverState], None]] = None,
) -> RunReport:
    """Run DRSOM from ``x0`` until ``|g| <= tol_g`` or a budget runs out.

    ``callback(state)`` is called after every iteration.
    """
    config = config or SolverConfig()
    obj.reset_counts()
    t0 = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    state = initial_state(obj, x0, config)
    trace: list[TraceRecord] = []
    status, message = MAX_ITER, ""

    while True:
        if state.gnorm <= config.tol_g:
            status = CONVERGED
            break
        if state.k >= config.max_iter:
            status = MAX_ITER
            break
        if state.rejections >= config.max_rejections:
            status = STALLED
            break
        if config.time_limit is not None and time.perf_counter() - t0 > config.time_limit:
            status = TIME_LIMIT
            break
        try:
            step(obj, state, config, rng)
        except (ModelError, TrsError, np.linalg.LinAlgError) as exc:
            status, message = ERROR, str(exc)
            break
        trace.append(state.record)
        if callback is not None:
            callback(state)

    return RunReport(
        status=status,
        x_final=state.x,
        f_final=state.f,
        gnorm_final=state.gnorm,
        iterations=len(trace),
        counts=obj.counts.snapshot(),
        trace=trace,
        solver="drsom",
        wall_seconds=time.perf_counter() - t0,
        message=message,
    )


def with_overrides(config: SolverConfig, **kw) -> SolverConfig:
    return replace(config, **kw)
