import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from drsom import model as model_mod
from drsom.model import ModelError, ModelMethod, build_hvp, build_interp, build_model
from drsom.objective import Objective
from drsom.problems import lp_generate, lp_objective, quadratic, rosenbrock

from conftest import random_sym


def test_first_iteration_is_one_dimensional():
    obj = quadratic(np.eye(2))
    m = build_hvp(obj, np.array([2.0, 0.0]), np.array([2.0, 0.0]), np.zeros(2))
    assert m.j == 1
    assert np.allclose(m.Q, [[4.0]]) and np.allclose(m.c, [-4.0]) and np.allclose(m.G, [[4.0]])
    assert obj.counts.n_hvp == 1


def test_two_dimensional_hand_example():
    obj = quadratic(np.diag([1.0, 2.0]))
    x = np.array([1.0, 1.0])
    m = build_hvp(obj, x, obj.grad(x), np.array([0.5, 0.5]), obj.f(x))
    assert np.allclose(m.Q, [[9.0, -2.5], [-2.5, 0.75]])
    assert np.allclose(m.c, [-5.0, 1.5])
    assert np.allclose(m.G, [[5.0, -1.5], [-1.5, 0.5]])
    assert m.gram_rank == 2 and obj.counts.n_hvp == 2
    assert m.f0 == 1.5


def test_parallel_momentum_flags_rank():
    obj = rosenbrock(2)
    x = np.array([-1.2, 1.0])
    g = obj.grad(x)
    m = build_hvp(obj, x, g, 0.3 * g)
    assert m.j == 2 and m.gram_rank == 1


def test_nonfinite_model_rejected():
    obj = Objective(2, f=lambda x: 0.0, grad=lambda x: x, hvp=lambda x, v: np.full(2, np.nan))
    with pytest.raises(ModelError, match="model build failed"):
        build_hvp(obj, np.ones(2), np.ones(2), np.zeros(2))


def test_zero_gradient_rejected():
    with pytest.raises(ModelError, match="model build failed"):
        build_hvp(quadratic(np.eye(2)), np.zeros(2), np.zeros(2), np.zeros(2))


def test_interp_hook_identity():
    obj = quadratic(np.eye(2))
    x = np.array([1.0, 0.0])
    m = build_interp(obj, x, np.array([1.0, 0.0]), np.array([0.0, 1.0]), obj.f(x), betas=[(1, 0), (0, 1), (1, 1)])
    assert np.allclose(m.Q, np.eye(2), atol=1e-12)
    assert obj.counts.n_f == 3


@given(st.integers(0, 10_000), st.integers(3, 6), st.booleans())
def test_interp_exact_on_quadratics(seed, ell, gram_scale):
    rng = np.random.default_rng(seed)
    n = 6
    A = random_sym(rng, n)
    obj = quadratic(A, rng.standard_normal(n))
    x = rng.standard_normal(n)
    g, d = obj.grad(x), rng.standard_normal(n)
    mh = build_hvp(obj, x, g, d, obj.f(x))
    mi = build_interp(obj, x, g, d, obj.f(x), ell, 0.7, rng, gram_scale=gram_scale)
    assert np.linalg.norm(mi.Q - mh.Q) <= 1e-8 * (1 + np.linalg.norm(mh.Q)) * max(1.0, np.linalg.norm(g) ** 2)


def test_interp_on_lp_small_scale():
    inst = lp_generate(300, 100, 0.15, seed=3)
    obj = lp_objective(inst)
    rng = np.random.default_rng(0)
    x = 0.5 * rng.standard_normal(100)
    g, d = obj.grad(x), 0.05 * rng.standard_normal(100)
    mh = build_hvp(obj, x, g, d, obj.f(x))
    # probes of x-space length 1e-2 keep every coordinate away from the smoothing kink
    mi = build_interp(obj, x, g, d, obj.f(x), 3, 1e-2, rng, gram_scale=True)
    assert np.linalg.norm(mi.Q - mh.Q) <= 1e-2 * (1 + np.linalg.norm(mh.Q))


def test_interp_degenerate_after_retries(monkeypatch):
    def collinear(rng, ell, j, scale):
        return np.tile([[1.0, 1.0]], (ell, 1)) * np.arange(1, ell + 1)[:, None]

    monkeypatch.setattr(model_mod, "_sample_betas", collinear)
    obj = quadratic(np.eye(2))
    with pytest.raises(ModelError, match="interpolation degenerate"):
        build_interp(obj, np.ones(2), np.ones(2), np.array([1.0, -1.0]), 1.0, rng=np.random.default_rng(0))
    assert obj.counts.n_f == 0


def test_radius_override_sets_probe_length():
    seen = []
    A = np.diag([1.0, 4.0, 9.0])
    base = quadratic(A)

    def f(x):
        seen.append(x.copy())
        return base.f(x)

    obj = Objective(3, f, base.grad, base.hvp)
    x = np.array([1.0, 1.0, 1.0])
    method = ModelMethod(interp_scale_by_radius=True)
    build_model(obj, method, x, obj.grad(x), np.array([0.1, 0.0, 0.0]), base.f(x), np.random.default_rng(1), radius=0.05)
    assert np.allclose([np.linalg.norm(p - x) for p in seen], 0.05)


def test_model_method_validation():
    with pytest.raises(ValueError):
        ModelMethod(tag="newton")
    with pytest.raises(ValueError):
        ModelMethod(interp_samples=2)
    with pytest.raises(ValueError):
        ModelMethod(interp_scale=0.0)


def test_exact_and_fd_models_agree():
    obj = rosenbrock(6)
    rng = np.random.default_rng(2)
    x = rng.uniform(-1, 1, 6)
    g, d = obj.grad(x), 0.1 * rng.standard_normal(6)
    me = build_hvp(obj, x, g, d, use_exact=True)
    mf = build_hvp(obj, x, g, d, use_exact=False)
    assert np.linalg.norm(me.Q - mf.Q) <= 1e-4 * np.linalg.norm(me.Q)


def test_model_error_decays_cubically():
    obj = rosenbrock(4)
    rng = np.random.default_rng(4)
    x = rng.uniform(-1, 1, 4)
    g, d = obj.grad(x), rng.standard_normal(4)
    m = build_hvp(obj, x, g, d, obj.f(x))
    direction = rng.standard_normal(2)
    ts = np.logspace(-1, -3, 6) / np.linalg.norm(g)
    errs = [abs(obj.f(x + m.step(t * direction)) - m.value(t * direction)) for t in ts]
    slope = np.polyfit(np.log(ts), np.log(errs), 1)[0]
    assert slope >= 2.7


def test_model_invariants(rng):
    obj = rosenbrock(4)
    x, d = rng.standard_normal(4), rng.standard_normal(4)
    g = obj.grad(x)
    m = build_hvp(obj, x, g, d)
    assert np.array_equal(m.Q, m.Q.T) and np.array_equal(m.G, m.G.T)
    B = np.column_stack([-g, d])
    assert np.allclose(m.G, B.T @ B, rtol=1e-10)
    assert np.allclose(m.c, [-(g @ g), g @ d])
    assert np.allclose(m.step(np.array([0.2, -0.3])), -0.2 * g - 0.3 * d)
