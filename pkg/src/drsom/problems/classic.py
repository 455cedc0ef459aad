"""Classic smooth test functions with analytic gradients and Hessian-vector products."""

from __future__ import annotations

import numpy as np

from ..objective import Objective


def quadratic(A, b=None, name: str = "quadratic") -> Objective:
    """f(x) = 1/2 x'Ax + b'x."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    b = np.zeros(n) if b is None else np.asarray(b, dtype=float)
    meta = {"x0": np.ones(n), "A": A, "b": b}
    try:
        meta["x_star"] = np.linalg.solve(A, -b)
    except np.linalg.LinAlgError:
        pass
    return Objective(
        dim=n,
        f=lambda x: 0.5 * x @ A @ x + b @ x,
        grad=lambda x: A @ x + b,
        hvp=lambda x, v: A @ v,
        name=name,
        meta=meta,
    )


def _random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    Qm, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Qm * np.sign(np.diag(R))


def ill_conditioned_quadratic(n: int = 20, cond: float = 1e4, seed: int = 0) -> Objective:
    rng = np.random.default_rng(seed)
    U = _random_orthogonal(n, rng)
    eig = np.logspace(0.0, np.log10(cond), n)
    A = (U * eig) @ U.T
    A = 0.5 * (A + A.T)
    b = rng.standard_normal(n)
    obj = quadratic(A, b, name=f"quadratic_cond{cond:g}")
    obj.meta["cond"] = cond
    return obj


def rosenbrock(n: int = 2) -> Objective:
    """Extended Rosenbrock: sum over pairs of 100(x2 - x1^2)^2 + (1 - x1)^2."""
    if n < 2 or n % 2:
        raise ValueError("extended Rosenbrock needs an even dimension >= 2")

    def f(x):
        a, b = x[0::2], x[1::2]
        return float(np.sum(100.0 * (b - a**2) ** 2 + (1.0 - a) ** 2))

    def grad(x):
        a, b = x[0::2], x[1::2]
        g = np.empty_like(x)
        t = b - a**2
        g[0::2] = -400.0 * a * t - 2.0 * (1.0 - a)
        g[1::2] = 200.0 * t
        return g

    def hvp(x, v):
        a, b = x[0::2], x[1::2]
        va, vb = v[0::2], v[1::2]
        haa = 1200.0 * a**2 - 400.0 * b + 2.0
        hab = -400.0 * a
        out = np.empty_like(v, dtype=float)
        out[0::2] = haa * va + hab * vb
        out[1::2] = hab * va + 200.0 * vb
        return out

    x0 = np.tile([-1.2, 1.0], n // 2)
    return Objective(n, f, grad, hvp, name=f"rosenbrock{n}", meta={"x0": x0, "x_star": np.ones(n), "f_star": 0.0})


def beale() -> Objective:
    ys = np.array([1.5, 2.25, 2.625])
    ks = np.array([1.0, 2.0, 3.0])

    def terms(x):
        u, v = x
        return ys - u * (1.0 - v**ks)

    def f(x):
        return float(np.sum(terms(x) ** 2))

    def jac(x):
        u, v = x
        return np.column_stack([-(1.0 - v**ks), u * ks * v ** (ks - 1)])

    def grad(x):
        return 2.0 * jac(x).T @ terms(x)

    def hvp(x, w):
        u, v = x
        r = terms(x)
        J = jac(x)
        # second derivatives of each residual
        d_uv = ks * v ** (ks - 1)
        d_vv = u * ks * (ks - 1) * v ** np.maximum(ks - 2, 0)
        H = 2.0 * J.T @ J
        H[0, 1] += 2.0 * np.sum(r * d_uv)
        H[1, 0] += 2.0 * np.sum(r * d_uv)
        H[1, 1] += 2.0 * np.sum(r * d_vv)
        return H @ w

    return Objective(2, f, grad, hvp, name="beale", meta={"x0": np.array([1.0, 1.0]), "x_star": np.array([3.0, 0.5]), "f_star": 0.0})


HIMMELBLAU_MINIMA = np.array(
    [
        [3.0, 2.0],
        [-2.805118086952745, 3.131312518250573],
        [-3.779310253377747, -3.283185991286170],
        [3.584428340330492, -1.848126526964404],
    ]
)


def himmelblau() -> Objective:
    """(x^2 + y - 11)^2 + (x + y^2 - 7)^2, four global minima with f = 0."""

    def f(z):
        x, y = z
        return float((x * x + y - 11) ** 2 + (x + y * y - 7) ** 2)

    def grad(z):
        x, y = z
        a = x * x + y - 11
        b = x + y * y - 7
        return np.array([4 * x * a + 2 * b, 2 * a + 4 * y * b])

    def hvp(z, v):
        x, y = z
        a = x * x + y - 11
        b = x + y * y - 7
        H = np.array([[4 * a + 8 * x * x + 2, 4 * x + 4 * y], [4 * x + 4 * y, 2 + 4 * b + 8 * y * y]])
        return H @ v

    return Objective(2, f, grad, hvp, name="himmelblau", meta={"x0": np.array([0.0, 0.0]), "minima": HIMMELBLAU_MINIMA})


def nonconvex_quartic(n: int = 10, seed: int = 0) -> Objective:
    """1/2 x'Ax + 1/4 sum x_i^4 with A symmetric indefinite; bounded below."""
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((n, n))
    A = 0.5 * (M + M.T) / np.sqrt(n)
    return Objective(
        n,
        f=lambda x: 0.5 * x @ A @ x + 0.25 * np.sum(x**4),
        grad=lambda x: A @ x + x**3,
        hvp=lambda x, v: A @ v + 3.0 * x**2 * v,
        name=f"nonconvex_quartic{n}",
        meta={"x0": rng.standard_normal(n) * 0.1, "A": A},
    )


def convex_quartic(n: int = 10, seed: int = 0, cond: float = 10.0) -> Objective:
    """sum_i phi_i((U(x - x*))_i) with phi_i(t) = w_i t^2/2 + t^3/3 + t^4/4.

    With w_i in [1, cond], phi_i'' = w_i + 2t + 3t^2 >= w_i - 1/3 > 0, so the
    function is strongly convex with the unique minimizer x*. The Hessian at
    x* is U' diag(w) U (condition number ``cond``) and the cubic term keeps
    it non-constant nearby.
    """
    if cond < 1:
        raise ValueError("cond must be >= 1")
    rng = np.random.default_rng(seed)
    U = _random_orthogonal(n, rng)
    x_star = rng.standard_normal(n)
    w = np.logspace(0.0, np.log10(cond), n)

    def f(x):
        t = U @ (x - x_star)
        return float(np.sum(w * t**2 / 2 + t**3 / 3 + t**4 / 4))

    def grad(x):
        t = U @ (x - x_star)
        return U.T @ (w * t + t**2 + t**3)

    def hvp(x, v):
        t = U @ (x - x_star)
        return U.T @ ((w + 2 * t + 3 * t**2) * (U @ v))

    x0 = x_star + 0.5 * rng.standard_normal(n) / np.sqrt(n)
    return Objective(n, f, grad, hvp, name=f"convex_quartic{n}", meta={"x0": x0, "x_star": x_star, "f_star": 0.0})


def separable_quartic(a, sigma: float = 1.0, radius: float = 2.0) -> Objective:
    """sum_i a_i x_i^2/2 + sigma x_i^4/4.

    The Hessian diag(a_i + 3 sigma x_i^2) is Lipschitz with constant
    ``6 * sigma * radius`` on the box |x_i| <= radius, recorded in
    ``meta["M"]``.
    """
    a = np.asarray(a, dtype=float)
    n = a.size
    x_star = np.where(a < 0, np.sqrt(np.maximum(-a, 0.0) / sigma), 0.0)
    return Objective(
        n,
        f=lambda x: float(np.sum(0.5 * a * x**2 + 0.25 * sigma * x**4)),
        grad=lambda x: a * x + sigma * x**3,
        hvp=lambda x, v: (a + 3.0 * sigma * x**2) * v,
        name=f"separable_quartic{n}",
        meta={"M": 6.0 * sigma * radius, "box": radius, "x_star": x_star, "x0": np.full(n, 0.1)},
    )


def classic_suite(n_rosenbrock: int = 10, n_quadratic: int = 20, cond: float = 1e4, seed: int = 0) -> list[Objective]:
    return [
        rosenbrock(2),
        rosenbrock(n_rosenbrock),
        ill_conditioned_quadratic(n_quadratic, cond, seed),
        beale(),
        himmelblau(),
        nonconvex_quartic(10, seed),
        convex_quartic(10, seed),
    ]


CLASSIC = {
    "rosenbrock": rosenbrock,
    "quadratic": ill_conditioned_quadratic,
    "beale": beale,
    "himmelblau": himmelblau,
    "nonconvex_quartic": nonconvex_quartic,
    "convex_quartic": convex_quartic,
}
