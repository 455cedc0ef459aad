import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from drsom.objective import DegenerateDirection, Objective, fd_gradient, fd_step, hvp, hvp_fd
from drsom.problems import quadratic, rosenbrock


def half_sq(n=2, exact=True):
    return Objective(n, f=lambda x: 0.5 * x @ x, grad=lambda x: x.copy(), hvp=(lambda x, v: v.copy()) if exact else None)


def test_fd_identity_hessian():
    obj = half_sq(exact=False)
    out = hvp_fd(obj, np.array([1.0, 0.0]), np.array([0.0, 2.0]), np.array([1.0, 0.0]))
    assert np.allclose(out, [0.0, 2.0], atol=1e-12)
    assert obj.counts.n_g == 1 and obj.counts.n_hvp == 0


def test_fd_diagonal_hessian():
    obj = quadratic(np.diag([1.0, 3.0]))
    obj.hvp = None
    out = hvp(obj, np.zeros(2), np.array([1.0, 1.0]), np.zeros(2))
    assert np.allclose(out, [1.0, 3.0], atol=1e-6)


def test_fd_rosenbrock_row():
    obj = rosenbrock(2)
    x = np.array([1.0, 1.0])
    out = hvp_fd(obj, x, np.array([1.0, 0.0]), obj.grad(x))
    assert np.allclose(out, [802.0, -400.0], atol=1e-4 * 802)


def test_zero_direction_rejected():
    obj = half_sq()
    with pytest.raises(DegenerateDirection, match="degenerate direction"):
        hvp_fd(obj, np.ones(2), np.zeros(2), np.ones(2))


def test_exact_dispatch_and_counts():
    obj = half_sq()
    v = np.array([0.3, -2.0])
    assert np.array_equal(hvp(obj, np.ones(2), v, np.ones(2)), v)
    assert (obj.counts.n_hvp, obj.counts.n_g) == (1, 0)


def test_no_exact_matches_fd_bitwise():
    a, b = half_sq(exact=False), half_sq(exact=False)
    x, v = np.array([0.7, -1.1]), np.array([2.0, 0.5])
    assert np.array_equal(hvp(a, x, v, x.copy()), hvp_fd(b, x, v, x.copy()))


def test_use_exact_false_forces_fd():
    obj = rosenbrock(2)
    x = np.array([-1.2, 1.0])
    hvp(obj, x, np.ones(2), obj.grad(x), use_exact=False)
    assert obj.counts.n_hvp == 0 and obj.counts.n_g == 1


def test_counts_reset_and_snapshot():
    obj = half_sq()
    obj.value(np.ones(2))
    snap = obj.counts.snapshot()
    obj.value(np.ones(2))
    assert snap.n_f == 1 and obj.counts.n_f == 2
    obj.reset_counts()
    assert obj.counts.n_f == 0


def test_missing_exact_hvp_raises():
    with pytest.raises(RuntimeError):
        half_sq(exact=False).hvp_exact(np.ones(2), np.ones(2))


def test_dim_must_be_positive():
    with pytest.raises(ValueError):
        Objective(0, f=lambda x: 0.0, grad=lambda x: x)


@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_fd_step_scale_invariant(s, xs):
    x = np.array([xs, 0.0])
    v = np.array([1.0, 2.0])
    assert np.isclose(fd_step(x, s * v) * s, fd_step(x, v), rtol=1e-12)


@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3))
def test_fd_gradient_on_rosenbrock(xs):
    obj = rosenbrock(2)
    x = np.array(xs[:2])
    g = obj.grad(x)
    assert np.max(np.abs(fd_gradient(obj, x) - g)) <= 1e-5 * (1 + np.max(np.abs(g)))
