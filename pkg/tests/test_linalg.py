import numpy as np
import pytest

from dcsplit.errors import NonFinite, SingularMatrix
from dcsplit.linalg import (LUFactor, child_seeds, conjugate_gradient, gaussian_matrix,
                            lu_solve, pseudo_inverse)


def random_spd(n, rng):
    G = rng.standard_normal((n, n))
    return G.T @ G + n * np.eye(n)


def test_lu_identity_and_diagonal():
    np.testing.assert_array_equal(lu_solve(np.eye(3), [1.0, 2.0, 3.0]), [1, 2, 3])
    np.testing.assert_allclose(lu_solve(np.diag([2.0, 4.0]), [2.0, 8.0]), [1, 2])


def test_lu_residual_spd(rng):
    A = random_spd(10, rng)
    b = rng.standard_normal(10)
    x = lu_solve(A, b)
    assert np.max(np.abs(A @ x - b)) <= 1e-8 * (1 + np.max(np.abs(b)))


@pytest.mark.parametrize("seed", range(10))
def test_lu_residual_well_conditioned(seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((25, 25)) + 10 * np.eye(25)
    assert np.linalg.cond(A) < 1e6
    b = rng.standard_normal(25)
    x = lu_solve(A, b)
    assert np.max(np.abs(A @ x - b)) <= 1e-8 * (1 + np.max(np.abs(b)))


def test_lu_singular():
    with pytest.raises(SingularMatrix):
        lu_solve(np.array([[1.0, 2.0], [2.0, 4.0]]), [1.0, 1.0])
    with pytest.raises(SingularMatrix):
        LUFactor(np.zeros((3, 3)))


def test_lu_rejects_nonfinite():
    with pytest.raises(NonFinite):
        lu_solve(np.array([[np.nan, 0], [0, 1.0]]), [1.0, 1.0])


def test_cg_identity_one_iteration():
    b = np.array([3.0, -1.0, 2.0])
    calls = []

    def apply(v):
        calls.append(1)
        return v

    x, ok = conjugate_gradient(apply, b, tol=1e-12)
    assert ok
    np.testing.assert_allclose(x, b)
    # one residual evaluation plus one CG iteration
    assert len(calls) == 2


def test_cg_diagonal():
    d = np.array([1.0, 10.0, 100.0])
    x, ok = conjugate_gradient(lambda v: d * v, np.ones(3), tol=1e-12)
    assert ok
    np.testing.assert_allclose(x, [1, 0.1, 0.01], rtol=1e-10)


@pytest.mark.parametrize("n", [5, 50, 200])
def test_cg_matches_lu(n, rng):
    A = random_spd(n, rng)
    b = rng.standard_normal(n)
    x, ok = conjugate_gradient(lambda v: A @ v, b, tol=1e-13)
    assert ok
    np.testing.assert_allclose(x, lu_solve(A, b), atol=1e-6)


def test_cg_reports_nonconvergence(rng):
    A = random_spd(40, rng)
    b = rng.standard_normal(40)
    x, ok = conjugate_gradient(lambda v: A @ v, b, tol=1e-14, max_iter=2)
    assert not ok
    assert np.linalg.norm(A @ x - b) < np.linalg.norm(b)


def test_cg_rls_system_matches_lu(rng):
    A = gaussian_matrix(100, 50, 3, normalize_columns=True)
    u = rng.standard_normal(50)
    beta = 0.04
    M = beta * A.T @ A + np.eye(50)
    x, ok = conjugate_gradient(lambda v: M @ v, u, tol=1e-13)
    np.testing.assert_allclose(x, lu_solve(M, u), atol=1e-6)


def test_pseudo_inverse_examples():
    np.testing.assert_allclose(pseudo_inverse(np.eye(4)), np.eye(4))
    np.testing.assert_allclose(pseudo_inverse(np.ones((2, 1))), [[0.5, 0.5]])


def test_pseudo_inverse_left_inverse(rng):
    Q = rng.standard_normal((6, 4))
    np.testing.assert_allclose(pseudo_inverse(Q) @ Q, np.eye(4), atol=1e-8)


def test_pseudo_inverse_square_is_inverse(rng):
    Q = rng.standard_normal((5, 5)) + 5 * np.eye(5)
    np.testing.assert_allclose(pseudo_inverse(Q), np.linalg.inv(Q), atol=1e-10)


def test_pseudo_inverse_rank_deficient():
    with pytest.raises(SingularMatrix):
        pseudo_inverse(np.ones((3, 2)))


def test_gaussian_normalized_columns():
    G = gaussian_matrix(3, 2, 7, normalize_columns=True)
    np.testing.assert_allclose(np.linalg.norm(G, axis=0), [1, 1], atol=1e-12)


def test_gaussian_deterministic():
    a = gaussian_matrix(20, 5, 11)
    b = gaussian_matrix(20, 5, 11)
    assert a.tobytes() == b.tobytes()
    assert a.tobytes() != gaussian_matrix(20, 5, 12).tobytes()


@pytest.mark.parametrize("seed", [0, 1, 2, 99])
def test_gaussian_moments(seed):
    g = gaussian_matrix(1000, 1, seed).ravel()
    assert -0.2 < g.mean() < 0.2
    assert 0.8 < g.var() < 1.2


def test_child_seeds_distinct_and_stable():
    s = child_seeds(5, 4)
    assert len(set(s)) == 4
    assert s == child_seeds(5, 4)
