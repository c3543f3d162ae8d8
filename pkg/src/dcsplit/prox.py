"""Proximal maps and smooth-part gradients for the three experiment models.

Every prox takes the step ``beta`` explicitly and evaluates

    prox_{beta*phi}(x) = argmin_u  phi(u) + ||u - x||^2 / (2*beta).
"""

from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import NotConverged
from .linalg import LUFactor, as_finite, conjugate_gradient, pseudo_inverse


def soft_threshold(x, lam):
    """Componentwise ``sign(x) * max(|x| - lam, 0)``; the prox of ``lam*||.||_1``."""
    if lam < 0:
        raise ValueError("threshold must be non-negative")
    x = np.asarray(x, dtype=np.float64)
    if lam == 0:
        return x.copy()
    return np.sign(x) * np.maximum(np.abs(x) - lam, 0.0)


def l1_norm(x):
    return float(np.abs(x).sum())


# -- quadratic -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class QuadraticFn:
    """``f(x) = 1/2 x^T Q x + c^T x + d``.

    A square ``Q`` is used as given and should be symmetric. A rectangular
    ``M x N`` matrix has no quadratic form of its own, so it is read as the
    Gram form ``1/2 ||Q x||^2``; its prox is then evaluated through the
    left pseudo-inverse of ``Q`` stacked on ``I / sqrt(beta)``.
    """

    Q: np.ndarray
    c: np.ndarray
    d: float = 0.0
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "Q", as_finite(self.Q, "Q"))
        object.__setattr__(self, "c", as_finite(self.c, "c"))
        if self.Q.ndim != 2 or self.c.shape != (self.Q.shape[1],):
            raise ValueError(f"c must have length {self.Q.shape[1]}")

    @property
    def square(self):
        return self.Q.shape[0] == self.Q.shape[1]

    @property
    def dim(self):
        return self.Q.shape[1]

    def hessian(self):
        if self.square:
            return 0.5 * (self.Q + self.Q.T)
        return self.Q.T @ self.Q

    def strong_convexity(self):
        return max(float(np.linalg.eigvalsh(self.hessian()).min()), 0.0)

    def value(self, x):
        if self.square:
            quad = 0.5 * x @ (self.Q @ x)
        else:
            Qx = self.Q @ x
            quad = 0.5 * Qx @ Qx
        return float(quad + self.c @ x + self.d)

    def gradient(self, x):
        return self.hessian() @ x + self.c

    def _solver(self, beta):
        key = float(beta)
        if key not in self._cache:
            n = self.dim
            if self.square:
                self._cache[key] = LUFactor(self.Q + np.eye(n) / beta)
            else:
                K = np.vstack([self.Q, np.eye(n) / np.sqrt(beta)])
                self._cache[key] = pseudo_inverse(K)
        return self._cache[key]

    def prox(self, beta, x):
        return prox_quadratic(self, beta, x)


def prox_quadratic(fn, beta, x):
    """Prox of a :class:`QuadraticFn`: solves ``(H + I/beta) u = x/beta - c``."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    x = np.asarray(x, dtype=np.float64)
    solver = fn._solver(beta)
    if fn.square:
        return solver.solve(x / beta - fn.c)
    M = fn.Q.shape[0]
    rhs = np.concatenate([np.zeros(M), (x - beta * fn.c) / np.sqrt(beta)])
    return solver @ rhs


# -- least squares -----------------------------------------------------------

class LeastSquaresProx:
    """Prox of ``1/2 ||A w - b||^2``, i.e. ``(beta A^T A + I) y = beta A^T b + u``.

    The LU factor (or, for ``method="cg"``, nothing) is built once per beta.
    """

    def __init__(self, A, b, method="lu", cg_tol=1e-12):
        if method not in ("lu", "cg"):
            raise ValueError(f"unknown method {method!r}")
        self.A = as_finite(A, "A")
        self.b = as_finite(b, "b")
        self.method = method
        self.cg_tol = cg_tol
        self._Atb = self.A.T @ self.b
        self._lu = {}
        self.cg_failures = 0

    def value(self, w):
        r = self.A @ w - self.b
        return 0.5 * float(r @ r)

    def __call__(self, beta, u):
        return prox_least_squares(self.A, self.b, beta, u, method=self.method,
                                  _ctx=self)


def prox_least_squares(A, b, beta, u, method="lu", _ctx=None):
    """Solve ``(beta A^T A + I) y = beta A^T b + u`` by LU or CG.

    With ``method="cg"`` a standalone call raises :class:`NotConverged` when
    the tolerance is missed. Inside a :class:`LeastSquaresProx` the failure
    is not fatal: the best iterate is returned and ``cg_failures`` is bumped.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    A = np.asarray(A, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    Atb = _ctx._Atb if _ctx is not None else A.T @ b
    rhs = beta * Atb + u
    if method == "lu":
        if _ctx is not None:
            lu = _ctx._lu.get(beta)
            if lu is None:
                lu = _ctx._lu[beta] = LUFactor(beta * (A.T @ A) + np.eye(A.shape[1]))
        else:
            lu = LUFactor(beta * (A.T @ A) + np.eye(A.shape[1]))
        return lu.solve(rhs)
    if method == "cg":
        tol = _ctx.cg_tol if _ctx is not None else 1e-12
        y, ok = conjugate_gradient(lambda v: beta * (A.T @ (A @ v)) + v, rhs,
                                   tol=tol, x0=u)
        if not ok:
            if _ctx is None:
                raise NotConverged("conjugate gradient missed its tolerance")
            _ctx.cg_failures += 1
        return y
    raise ValueError(f"unknown method {method!r}")


# -- Huber -------------------------------------------------------------------

@dataclass(frozen=True)
class HuberFn:
    """Componentwise Huber function; its gradient is 1-Lipschitz."""

    delta: float

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("delta must be positive")

    def value(self, x):
        a = np.abs(x)
        d = self.delta
        return float(np.where(a <= d, 0.5 * a * a, d * (a - 0.5 * d)).sum())

    lipschitz = 1.0


def grad_huber(x, fn):
    x = np.asarray(x, dtype=np.float64)
    return np.clip(x, -fn.delta, fn.delta)


# -- logarithmic regularizer -------------------------------------------------

@dataclass(frozen=True)
class LogRegularizer:
    """``h(w) = sum mu * (|w_i|/eps - log(|w_i| + eps) + log eps)``.

    Together with ``g = (mu/eps) ||w||_1`` this gives ``g - h = sum mu log(1 + |w_i|/eps)``.
    """

    mu: float
    epsilon: float

    def __post_init__(self):
        if self.mu < 0 or not self.epsilon > 0:
            raise ValueError("need mu >= 0 and epsilon > 0")

    @property
    def lipschitz(self):
        return self.mu / self.epsilon ** 2

    @property
    def l1_weight(self):
        return self.mu / self.epsilon

    def value(self, w):
        a = np.abs(w)
        eps = self.epsilon
        return float(self.mu * (a / eps - np.log1p(a / eps)).sum())


def grad_log_regularizer(w, fn):
    w = np.asarray(w, dtype=np.float64)
    a = np.abs(w)
    eps = fn.epsilon
    # 1/eps - 1/(a+eps) written to stay exact near zero
    return fn.mu * np.sign(w) * a / (eps * (a + eps))


# -- half squared norm -------------------------------------------------------

def grad_half_sq_norm(w):
    return np.array(w, dtype=np.float64)


# -- hinge + quadratic ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class HingeQuadraticFn:
    """``f(w, b) = q ||w||^2 + C * sum max(0, 1 - y_i (w^T x_i + b))``."""

    X: np.ndarray
    y: np.ndarray
    C: float = 1.0
    quad_coeff: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "X", as_finite(self.X, "X"))
        object.__setattr__(self, "y", as_finite(self.y, "y"))
        if self.X.ndim != 2 or self.X.shape[0] != self.y.shape[0]:
            raise ValueError("X rows must match the number of labels")
        if not np.all(np.abs(self.y) == 1):
            raise ValueError("labels must be +1 or -1")
        if self.C < 0 or self.quad_coeff < 0:
            raise ValueError("C and quad_coeff must be non-negative")

    def value(self, w, b):
        margins = 1.0 - self.y * (self.X @ w + b)
        return float(self.quad_coeff * (w @ w) + self.C * np.maximum(margins, 0.0).sum())


@dataclass
class HingeProxResult:
    w: np.ndarray
    b: float
    dual: np.ndarray
    passes: int
    converged: bool
    dual_values: list = None


@numba.njit(cache=True)
def _dual_cd(X, y, C, beta, scale, w, b, alpha, max_passes, tol):
    n, d = X.shape
    sq = np.empty(n)
    for i in range(n):
        s = 0.0
        for j in range(d):
            s += X[i, j] * X[i, j]
        sq[i] = beta * (s * scale + 1.0)
    for p in range(max_passes):
        change = 0.0
        for i in range(n):
            m = b
            for j in range(d):
                m += w[j] * X[i, j]
            grad = 1.0 - y[i] * m
            new = alpha[i] + grad / sq[i]
            if new < 0.0:
                new = 0.0
            elif new > C:
                new = C
            delta = new - alpha[i]
            if delta != 0.0:
                alpha[i] = new
                step = delta * y[i] * beta
                for j in range(d):
                    dw = step * scale * X[i, j]
                    w[j] += dw
                    if abs(dw) > change:
                        change = abs(dw)
                b += step
                if abs(step) > change:
                    change = abs(step)
        if change < tol:
            return b, p + 1, True
    return b, max_passes, False


def hinge_quadratic_dual_cd(fn, beta, u_w, u_b, max_passes=200, tol=1e-8,
                            dual0=None, record_dual=False):
    """Cyclic dual coordinate ascent for the hinge-quadratic prox.

    The dual variables are one multiplier per sample in ``[0, C]``; the
    primal point is kept in sync as
    ``w = (u_w + beta * sum a_i y_i x_i) / (1 + 2 q beta)`` and
    ``b = u_b + beta * sum a_i y_i``. Each coordinate update is an exact
    maximization, so the dual objective never decreases.

    Stops once a full pass moves ``(w, b)`` by less than ``tol`` in every
    coordinate, or after ``max_passes`` passes.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    u_w = np.asarray(u_w, dtype=np.float64)
    scale = 1.0 / (1.0 + 2.0 * fn.quad_coeff * beta)
    n = fn.X.shape[0]
    alpha = np.zeros(n) if dual0 is None else np.clip(np.array(dual0, dtype=np.float64), 0, fn.C)
    ya = fn.y * alpha
    w = scale * (u_w + beta * (fn.X.T @ ya))
    b = float(u_b + beta * ya.sum())
    values = [hinge_quadratic_dual_value(fn, beta, u_w, u_b, alpha)] if record_dual else None
    if not record_dual:
        b, passes, ok = _dual_cd(fn.X, fn.y, float(fn.C), float(beta), scale,
                                 w, b, alpha, max_passes, tol)
    else:
        passes, ok = 0, False
        while passes < max_passes and not ok:
            b, _, ok = _dual_cd(fn.X, fn.y, float(fn.C), float(beta), scale,
                                w, b, alpha, 1, tol)
            passes += 1
            values.append(hinge_quadratic_dual_value(fn, beta, u_w, u_b, alpha))
    return HingeProxResult(w, float(b), alpha, passes, ok, values)


def hinge_quadratic_dual_value(fn, beta, u_w, u_b, alpha):
    """Dual objective of the hinge-quadratic prox at multipliers ``alpha``."""
    q = fn.quad_coeff
    ya = fn.y * alpha
    s_w = fn.X.T @ ya
    s_b = ya.sum()
    w = (u_w + beta * s_w) / (1.0 + 2.0 * q * beta)
    b = u_b + beta * s_b
    return float(alpha.sum() + q * (w @ w) + ((w - u_w) @ (w - u_w)) / (2 * beta)
                 - s_w @ w + (b - u_b) ** 2 / (2 * beta) - s_b * b)


def prox_hinge_quadratic(fn, beta, u_w, u_b, max_passes=200, tol=1e-8):
    """Prox of :class:`HingeQuadraticFn` at ``(u_w, u_b)``; returns ``(w, b)``."""
    res = hinge_quadratic_dual_cd(fn, beta, u_w, u_b, max_passes=max_passes, tol=tol)
    return res.w, res.b
