import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from drsom.trs import TrsError, quad_value, solve_regularized, solve_trs, subspace_eigs
from drsom.model import build_hvp
from drsom.problems import quadratic

from conftest import random_spd, random_sym
from oracles import TRS_KINDS, kkt_violations, random_trs_case, trs_value_oracle


def test_interior_newton_step():
    s = solve_trs(np.diag([2.0, 2.0]), np.array([-1.0, 0.0]), np.eye(2), 10.0)
    assert np.allclose(s.alpha, [0.5, 0.0]) and s.lam == 0.0
    assert s.model_decrease == pytest.approx(0.25)
    assert not s.on_boundary


def test_hard_case_negative_curvature():
    s = solve_trs(np.diag([1.0, -1.0]), np.zeros(2), np.eye(2), 1.0)
    assert s.lam == pytest.approx(1.0)
    assert np.allclose(np.abs(s.alpha), [0.0, 1.0])
    assert s.model_decrease == pytest.approx(0.5)
    assert s.on_boundary


def test_boundary_easy_case():
    # Q = I, c = (-3, -4), radius 1 -> alpha = (0.6, 0.8), lam = 4
    s = solve_trs(np.eye(2), np.array([-3.0, -4.0]), np.eye(2), 1.0)
    assert np.allclose(s.alpha, [0.6, 0.8]) and s.lam == pytest.approx(4.0)


def test_one_dimensional_problem():
    s = solve_trs(np.array([[4.0]]), np.array([-4.0]), np.array([[4.0]]), 100.0)
    assert np.allclose(s.alpha, [1.0])


def test_gram_norm_is_respected():
    G = np.diag([4.0, 1.0])
    s = solve_trs(np.zeros((2, 2)), np.array([-1.0, 0.0]), G, 1.0)
    assert np.allclose(s.alpha, [0.5, 0.0])


def test_indefinite_gram_rejected():
    with pytest.raises(TrsError, match="invalid Gram"):
        solve_trs(np.eye(2), np.ones(2), np.diag([1.0, -1.0]), 1.0)


def test_dimension_cap():
    with pytest.raises(TrsError):
        solve_trs(np.eye(3), np.ones(3), np.eye(3), 1.0, j_max=2)


def test_bad_radius():
    with pytest.raises(TrsError):
        solve_trs(np.eye(2), np.ones(2), np.eye(2), 0.0)


@pytest.mark.parametrize("kind", TRS_KINDS)
def test_random_cases_match_oracle(kind):
    rng = np.random.default_rng(TRS_KINDS.index(kind))
    for _ in range(40):
        Q, c, G, radius = random_trs_case(rng, kind)
        sol = solve_trs(Q, c, G, radius)
        assert not kkt_violations(sol, Q, c, G, radius)
        assert quad_value(Q, c, sol.alpha) == pytest.approx(trs_value_oracle(Q, c, G, radius), abs=1e-6)


def test_reduced_when_null_space_unbounded():
    # G = e1 e1', Q negative on e2: the e2 direction is dropped
    sol = solve_trs(np.diag([1.0, -1.0]), np.array([-1.0, 1.0]), np.diag([1.0, 0.0]), 0.5)
    assert sol.reduced
    assert sol.alpha[1] == 0.0 and sol.alpha[0] == pytest.approx(0.5)


@given(st.integers(0, 2**31 - 1))
def test_decrease_identity_on_boundary(seed):
    """m(0) - m(a) = 1/2 lam radius^2 + 1/2 a'(Q + lam G)a >= 1/2 lam radius^2."""
    rng = np.random.default_rng(seed)
    Q, c, G, radius = random_trs_case(rng, "indefinite")
    sol = solve_trs(Q, c, G, radius)
    if sol.lam > 0:
        extra = 0.5 * sol.alpha @ (Q + sol.lam * G) @ sol.alpha
        assert sol.model_decrease == pytest.approx(0.5 * sol.lam * radius**2 + extra, rel=1e-8, abs=1e-10)
        assert sol.model_decrease >= 0.5 * sol.lam * radius**2 - 1e-10


def test_full_space_lift():
    rng = np.random.default_rng(7)
    for _ in range(50):
        n = 6
        H = random_sym(rng, n)
        obj = quadratic(H, rng.standard_normal(n))
        x = rng.standard_normal(n)
        g, dmom = obj.grad(x), rng.standard_normal(n)
        m = build_hvp(obj, x, g, dmom)
        sol = solve_trs(m.Q, m.c, m.G, float(rng.uniform(0.1, 3)))
        d = m.step(sol.alpha)
        V, _ = np.linalg.qr(np.column_stack([g, dmom]))
        P = V @ V.T
        assert np.linalg.norm((P @ H @ P + sol.lam * np.eye(n)) @ d + g) <= 1e-6 * (1 + np.linalg.norm(g))


def test_regularized_examples():
    assert np.allclose(solve_regularized(np.diag([2.0, 2.0]), np.array([-1.0, 0.0]), np.eye(2), 0.0), [0.5, 0.0])
    assert np.allclose(solve_regularized(np.diag([1.0, -1.0]), np.array([-1.0, -1.0]), np.eye(2), 1.0), [1 / 3, 1.0])


def test_regularized_shrinks_with_mu():
    rng = np.random.default_rng(3)
    for _ in range(20):
        Q = random_spd(rng, 2)
        c = rng.standard_normal(2)
        G = random_spd(rng, 2, cond=5)
        norms = [np.linalg.norm(solve_regularized(Q, c, G, mu)) for mu in (1, 10, 100, 1000)]
        assert all(a > b for a, b in zip(norms, norms[1:]))


def test_regularized_singular_gram_stays_in_range():
    G = np.diag([1.0, 0.0])
    a = solve_regularized(np.eye(2), np.array([-1.0, 0.0]), G, 1.0)
    assert np.allclose(a, [1 / 3, 0.0])


def test_regularized_negative_mu():
    with pytest.raises(TrsError):
        solve_regularized(np.eye(2), np.ones(2), np.eye(2), -1.0)


def test_subspace_eigs_examples():
    assert np.allclose(subspace_eigs(np.diag([2.0, 6.0]), np.diag([1.0, 2.0])), [2.0, 3.0])
    Q = random_sym(np.random.default_rng(0), 2)
    assert np.allclose(subspace_eigs(Q, np.eye(2)), np.linalg.eigvalsh(Q))


def test_subspace_eigs_interlace():
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = 8
        A = random_sym(rng, n)
        obj = quadratic(A)
        x = rng.standard_normal(n)
        m = build_hvp(obj, x, obj.grad(x), rng.standard_normal(n))
        lo, hi = np.linalg.eigvalsh(A)[[0, -1]]
        mu = subspace_eigs(m.Q, m.G)
        assert lo - 1e-8 <= mu[0] and mu[-1] <= hi + 1e-8
