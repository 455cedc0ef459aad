import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def random_spd(rng, n, cond=10.0):
    Qm, _ = np.linalg.qr(rng.standard_normal((n, n)))
    eig = np.logspace(0.0, np.log10(cond), n)
    A = (Qm * eig) @ Qm.T
    return 0.5 * (A + A.T)


def random_sym(rng, n):
    M = rng.standard_normal((n, n))
    return 0.5 * (M + M.T)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def builtin_objectives():
    """Every built-in objective, paired with a sampler of test points."""
    from drsom.problems import (
        beale,
        convex_quartic,
        himmelblau,
        ill_conditioned_quadratic,
        lp_generate,
        lp_objective,
        nonconvex_quartic,
        rosenbrock,
        separable_quartic,
        snl_generate,
        snl_objective,
    )

    def normal(scale):
        return lambda rng, n: scale * rng.standard_normal(n)

    def lp_points(eps):
        # keep every coordinate at least 1e-3 away from the smoothing kink |t| = eps
        def sample(rng, n):
            x = 0.5 * rng.standard_normal(n)
            near = np.abs(np.abs(x) - eps) < 1e-3
            x[near] += np.sign(x[near]) * 2e-3
            return x

        return sample

    lp = lp_generate(60, 20, 0.3, seed=3)
    return [
        (rosenbrock(2), normal(1.0)),
        (rosenbrock(10), normal(1.0)),
        (ill_conditioned_quadratic(20, 1e4, 0), normal(1.0)),
        (beale(), normal(1.0)),
        (himmelblau(), normal(3.0)),
        (nonconvex_quartic(10, 0), normal(1.0)),
        (convex_quartic(10, 0), normal(1.0)),
        (separable_quartic([1.0, -1.0, 1.0, -1.0]), normal(1.0)),
        (lp_objective(lp), lp_points(lp.eps)),
        (snl_objective(snl_generate(30, 4, seed=2)), lambda rng, n: rng.random(n)),
    ]
