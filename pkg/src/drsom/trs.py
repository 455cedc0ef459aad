"""Dense trust-region subproblems in a Gram-matrix norm.

Solves

    min_a  c'a + 1/2 a'Qa   s.t.  sqrt(a'Ga) <= radius

for small dimension (the DRSOM subspace, or an expanded corrector
subspace), together with the radius-free variant that replaces the ball
by the penalty ``mu * a'Ga``.

``G`` may be singular, e.g. when the gradient and momentum are parallel.
Directions in ``null(G)`` are not limited by the norm; they are either
eliminated by exact minimization (when ``Q`` is positive definite there)
or dropped, which is exact whenever ``Q`` and ``c`` vanish on ``null(G)``
as they do for any Gram model ``Q = B'HB, c = B'g, G = B'B``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

J_MAX = 50
GRAM_RTOL = 1e-10
SECULAR_RTOL = 1e-12


class TrsError(ValueError):
    pass


@dataclass
class TrsSolution:
    alpha: np.ndarray
    lam: float
    model_decrease: float
    on_boundary: bool
    reduced: bool = False  # null(G) part dropped because Q was not PD there


def quad_value(Q: np.ndarray, c: np.ndarray, a: np.ndarray) -> float:
    return float(c @ a + 0.5 * a @ Q @ a)


def _check(Q, c, G, j_max):
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    G = np.atleast_2d(np.asarray(G, dtype=float))
    c = np.atleast_1d(np.asarray(c, dtype=float))
    j = c.size
    if Q.shape != (j, j) or G.shape != (j, j):
        raise TrsError(f"shape mismatch: Q{Q.shape}, G{G.shape}, c({j},)")
    if j > j_max:
        raise TrsError(f"subspace dimension {j} exceeds j_max={j_max}")
    if not (np.all(np.isfinite(Q)) and np.all(np.isfinite(G)) and np.all(np.isfinite(c))):
        raise TrsError("non-finite model data")
    return 0.5 * (Q + Q.T), c, 0.5 * (G + G.T)


@dataclass
class _GramSplit:
    """G = U diag(s) U' split into range and null parts.

    ``R = U_r diag(s_r)^-1/2`` maps Euclidean coordinates onto the range
    (so that R'GR = I) and ``N`` is an orthonormal basis of ``null(G)``.
    """

    R: np.ndarray
    N: np.ndarray


def _split_gram(G: np.ndarray) -> _GramSplit:
    s, U = np.linalg.eigh(G)
    scale = max(float(np.max(np.abs(s))), 0.0)
    if scale == 0.0:
        raise TrsError("invalid Gram: G is zero")
    if s[0] < -GRAM_RTOL * scale:
        raise TrsError(f"invalid Gram: min eigenvalue {s[0]:.3e} < 0")
    keep = s > GRAM_RTOL * scale
    R = U[:, keep] / np.sqrt(s[keep])
    return _GramSplit(R=R, N=U[:, ~keep])


def _reduce(Q, c, G):
    """Reduce to a Euclidean problem in y with a = R y + N z(y).

    Returns (Qy, cy, lift, reduced) where ``lift(y)`` rebuilds ``a``.
    """
    sp = _split_gram(G)
    R, N = sp.R, sp.N
    QR = Q @ R
    Qy = R.T @ QR
    cy = R.T @ c
    if N.shape[1] == 0:
        return Qy, cy, (lambda y: R @ y), False

    Qnn = N.T @ Q @ N
    Qnr = N.T @ QR
    cn = N.T @ c
    qscale = 1.0 + np.max(np.abs(Q))
    negligible = (
        np.max(np.abs(Qnn)) <= 1e-10 * qscale
        and np.max(np.abs(Qnr), initial=0.0) <= 1e-10 * qscale
        and np.max(np.abs(cn)) <= 1e-10 * (1.0 + np.max(np.abs(c)))
    )
    if not negligible:
        ev = np.linalg.eigvalsh(Qnn)
        if ev[0] > 1e-12 * qscale:
            # Eliminate z = -Qnn^{-1}(cn + Qnr y); Schur complement on the range.
            L = np.linalg.cholesky(Qnn)
            W = np.linalg.solve(L, Qnr)
            w = np.linalg.solve(L, cn)
            Qy = Qy - W.T @ W
            cy = cy - W.T @ w

            def lift(y):
                z = -np.linalg.solve(Qnn, cn + Qnr @ y)
                return R @ y + N @ z

            return 0.5 * (Qy + Qy.T), cy, lift, False
        return Qy, cy, (lambda y: R @ y), True
    return Qy, cy, (lambda y: R @ y), False


def _solve_ball(Q: np.ndarray, c: np.ndarray, radius: float):
    """Global minimizer of c'y + 1/2 y'Qy over |y| <= radius; returns (y, lam)."""
    r = c.size
    if r == 0:
        return np.zeros(0), 0.0
    theta, W = np.linalg.eigh(Q)
    gam = W.T @ c
    tmin = theta[0]
    gnorm = np.linalg.norm(gam)
    scale = 1.0 + np.max(np.abs(theta))

    if gnorm == 0.0 and tmin >= 0.0:
        return np.zeros(r), 0.0

    def y_of(lam):
        return -(W @ (gam / (theta + lam)))

    if tmin > 0.0:
        y0 = y_of(0.0)
        if np.linalg.norm(y0) <= radius:
            return y0, 0.0

    lo = max(0.0, -tmin)
    # near-hard case: the linear term has no weight on the leftmost eigenspace
    left = theta <= tmin + 1e-12 * scale
    if tmin <= 0.0 and np.linalg.norm(gam[left]) <= 1e-12 * gnorm:
        rest = ~left
        y_rest = -(W[:, rest] @ (gam[rest] / (theta[rest] - tmin)))
        nrm = np.linalg.norm(y_rest)
        if nrm <= radius:
            tau = np.sqrt(max(radius**2 - nrm**2, 0.0))
            return y_rest + tau * W[:, 0], float(lo)

    # secular equation 1/|y(lam)| = 1/radius on (lo, hi], increasing and nearly linear
    hi = lo + gnorm / radius
    while np.linalg.norm(y_of(hi)) > radius:
        hi = 2 * hi + 1.0

    def psi(lam):
        q = gam / (theta + lam)
        nq = np.linalg.norm(q)
        val = 1.0 / nq - 1.0 / radius
        dval = np.sum(q**2 / (theta + lam)) / nq**3
        return val, dval

    a, b = lo, hi
    lam = hi
    for _ in range(200):
        val, dval = psi(lam)
        if val > 0:
            b = lam
        else:
            a = lam
        if abs(val) <= SECULAR_RTOL / radius or b - a <= SECULAR_RTOL * max(b, 1e-300):
            break
        step = lam - val / dval if dval > 0 else 0.5 * (a + b)
        lam = step if a < step < b else 0.5 * (a + b)
    y = y_of(lam)
    ny = np.linalg.norm(y)
    if abs(ny - radius) > 1e-12 * radius:
        # near the hard case |y(lam)| is too sensitive to pin down by lam alone
        if ny < radius:
            w = W[:, 0]
            wy = float(w @ y)
            root = np.sqrt(wy**2 + radius**2 - ny**2)
            cands = [y + (-wy + root) * w, y + (-wy - root) * w]
            y = min(cands, key=lambda v: float(c @ v + 0.5 * v @ Q @ v))
        else:
            y = y * (radius / ny)
    return y, float(lam)


def solve_trs(Q, c, G, radius: float, j_max: int = J_MAX) -> TrsSolution:
    """Globally solve the G-norm trust-region subproblem.

    >>> s = solve_trs(np.diag([2.0, 2.0]), np.array([-1.0, 0.0]), np.eye(2), 10.0)
    >>> s.alpha, s.lam
    (array([0.5, 0. ]), 0.0)
    """
    if not radius > 0:
        raise TrsError("radius must be positive")
    Q, c, G = _check(Q, c, G, j_max)
    Qy, cy, lift, reduced = _reduce(Q, c, G)
    y, lam = _solve_ball(Qy, cy, radius)
    alpha = lift(y)
    dec = -quad_value(Q, c, alpha)
    on_boundary = bool(lam > 0.0 or np.linalg.norm(y) >= radius * (1 - 1e-10))
    return TrsSolution(alpha=alpha, lam=float(lam), model_decrease=dec, on_boundary=on_boundary, reduced=reduced)


def solve_regularized(Q, c, G, mu: float, j_max: int = J_MAX) -> np.ndarray:
    """Minimizer of c'a + 1/2 a'Qa + mu a'Ga, i.e. (Q + 2 mu G) a = -c."""
    if mu < 0:
        raise TrsError("mu must be nonnegative")
    Q, c, G = _check(Q, c, G, j_max)
    if mu == 0.0:
        K, rhs, lift = Q, -c, (lambda y: y)
    else:
        sp = _split_gram(G)
        R = sp.R
        if sp.N.shape[1] == 0:
            K, rhs, lift = Q + 2 * mu * G, -c, (lambda y: y)
        else:
            K = R.T @ Q @ R + 2 * mu * np.eye(R.shape[1])
            rhs = -(R.T @ c)
            lift = lambda y: R @ y  # noqa: E731
    try:
        return lift(np.linalg.solve(K, rhs))
    except np.linalg.LinAlgError:
        pass
    jitter = 1e-12 * max(abs(np.trace(K)), 1.0)
    try:
        return lift(np.linalg.solve(K + jitter * np.eye(K.shape[0]), rhs))
    except np.linalg.LinAlgError as exc:
        raise TrsError("regularized system singular") from exc


def subspace_eigs(Q, G, j_max: int = J_MAX) -> np.ndarray:
    """Generalized eigenvalues of (Q, G) on range(G), ascending."""
    Q, _, G = _check(Q, np.zeros(np.atleast_2d(Q).shape[0]), G, j_max)
    R = _split_gram(G).R
    return np.linalg.eigvalsh(R.T @ Q @ R)
