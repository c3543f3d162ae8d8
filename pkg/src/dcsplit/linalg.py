"""Dense linear algebra and seeded Gaussian generation.

Everything works on plain ``numpy.ndarray`` objects (float64). Random data
comes from numpy's PCG64 bit generator (128-bit state) and its ziggurat
normal sampler, so a given integer seed yields bit-identical arrays on every
platform numpy supports.
"""

import numpy as np
import scipy.linalg

from .errors import NonFinite, SingularMatrix

PIVOT_TOL = 1e-12


def as_finite(a, name="array"):
    """Return ``a`` as a float64 array, rejecting NaN/Inf entries."""
    a = np.asarray(a, dtype=np.float64)
    if not np.all(np.isfinite(a)):
        raise NonFinite(f"{name} contains non-finite entries")
    return a


class LUFactor:
    """LU factorization of a square matrix with partial pivoting.

    Factor once, solve many times; the RLS and quadratic proxes reuse the
    same system matrix at every iteration.

    Raises
    ------
    SingularMatrix
        If a pivot of ``U`` has magnitude below ``pivot_tol``.
    """

    def __init__(self, A, pivot_tol=PIVOT_TOL):
        A = as_finite(A, "A")
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"LU needs a square matrix, got shape {A.shape}")
        self.n = A.shape[0]
        self._lu, self._piv = scipy.linalg.lu_factor(A, check_finite=False)
        pivots = np.abs(np.diag(self._lu))
        if self.n and pivots.min() <= pivot_tol:
            raise SingularMatrix(
                f"pivot {pivots.min():.3e} below threshold {pivot_tol:g}")

    def solve(self, b):
        b = np.asarray(b, dtype=np.float64)
        if b.shape[0] != self.n:
            raise ValueError(f"rhs has {b.shape[0]} rows, matrix is {self.n}x{self.n}")
        return scipy.linalg.lu_solve((self._lu, self._piv), b, check_finite=False)


def lu_solve(A, b):
    """Solve ``A x = b`` for square nonsingular ``A``."""
    return LUFactor(A).solve(b)


def conjugate_gradient(apply_A, b, tol=1e-10, max_iter=None, x0=None):
    """Conjugate gradient for a symmetric positive-definite linear map.

    Parameters
    ----------
    apply_A : callable
        ``v -> A @ v``.
    b : ndarray
        Right-hand side.
    tol : float
        Relative residual target, ``||A x - b|| <= tol * ||b||``.
    max_iter : int, optional
        Defaults to ``10 * len(b)``.
    x0 : ndarray, optional
        Starting point (zeros by default).

    Returns
    -------
    x : ndarray
        Final iterate (the best one seen when not converged).
    converged : bool
    """
    b = np.asarray(b, dtype=np.float64)
    n = b.shape[0]
    if max_iter is None:
        max_iter = 10 * max(n, 1)
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=np.float64)
    r = b - apply_A(x)
    target = tol * np.linalg.norm(b)
    rr = r @ r
    best_x, best_res = x.copy(), np.sqrt(rr)
    if best_res <= target:
        return x, True
    p = r.copy()
    for _ in range(max_iter):
        Ap = apply_A(p)
        pAp = p @ Ap
        if pAp <= 0:
            break
        step = rr / pAp
        x = x + step * p
        r = r - step * Ap
        rr_new = r @ r
        res = np.sqrt(rr_new)
        if res < best_res:
            best_x, best_res = x.copy(), res
        if res <= target:
            return x, True
        p = r + (rr_new / rr) * p
        rr = rr_new
    return best_x, False


def pseudo_inverse(Q):
    """Left pseudo-inverse ``(Q^T Q)^{-1} Q^T`` of a full-column-rank matrix."""
    Q = as_finite(Q, "Q")
    return LUFactor(Q.T @ Q).solve(Q.T)


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def child_seeds(seed, count):
    """Derive ``count`` independent integer seeds from one master seed."""
    ss = np.random.SeedSequence(seed)
    return [int(s.generate_state(1, np.uint64)[0]) for s in ss.spawn(count)]


def gaussian_matrix(rows, cols, seed, normalize_columns=False):
    """I.i.d. standard normal ``rows x cols`` matrix, optionally with unit columns."""
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    G = _rng(seed).standard_normal((rows, cols))
    if normalize_columns:
        G /= np.linalg.norm(G, axis=0)
    return G


def gaussian_vector(size, seed):
    return _rng(seed).standard_normal(size)
