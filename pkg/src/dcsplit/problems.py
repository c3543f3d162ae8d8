"""Builders for the three experiment models.

* quadratic + l1 - Huber (parameter-tuning experiment),
* least squares with a logarithmic sparsity penalty,
* l1-regularized linear SVM on ``(w, b)``.
"""

from dataclasses import dataclass

import numpy as np

from .core import DCProblem
from .linalg import child_seeds, gaussian_matrix, gaussian_vector
from .prox import (HingeQuadraticFn, HuberFn, LeastSquaresProx, LogRegularizer,
                   QuadraticFn, grad_huber, grad_log_regularizer, hinge_quadratic_dual_cd,
                   l1_norm, prox_quadratic, soft_threshold)


@dataclass(frozen=True)
class QuadL1HuberSpec:
    """Random instance of ``1/2 x^T Q x + c^T x + d + w ||x||_1 - huber_delta(x)``.

    By default ``Q`` is an ``M x N`` standard Gaussian matrix. With
    ``spd=True`` it is instead ``G^T G + spd_shift * I`` for a square
    ``N x N`` Gaussian ``G`` (``M`` is ignored), which is symmetric positive
    definite with modulus at least ``spd_shift``.
    """

    M: int
    N: int
    kappa: float = 0.009
    delta: float = 0.001
    l1_weight: float = 1.0
    seed: int = 0
    spd: bool = False
    spd_shift: float = 0.1

    def __post_init__(self):
        if self.M < 1 or self.N < 1:
            raise ValueError("M and N must be >= 1")
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if self.l1_weight < 0:
            raise ValueError("l1_weight must be non-negative")


@dataclass(frozen=True)
class RlsLogSpec:
    m: int
    N: int
    mu: float = 0.001
    epsilon: float = 0.5
    seed: int = 0
    solver: str = "lu"

    def __post_init__(self):
        if self.m < 1 or self.N < 1:
            raise ValueError("m and N must be >= 1")
        if self.mu < 0 or not self.epsilon > 0:
            raise ValueError("need mu >= 0 and epsilon > 0")

    @property
    def lipschitz(self):
        return self.mu / self.epsilon ** 2


@dataclass(frozen=True)
class SvmSpec:
    C: float = 1.0
    lam: float = 0.001
    quad_coeff: float = 1.0

    def __post_init__(self):
        if self.C < 0 or self.lam < 0:
            raise ValueError("C and lam must be non-negative")


def quad_l1_huber_problem(Q, c, d=0.0, delta=0.001, l1_weight=1.0, name="quad_l1_huber"):
    quad = QuadraticFn(Q, c, d)
    huber = HuberFn(delta)

    def objective(x):
        return quad.value(x) + l1_weight * l1_norm(x) - huber.value(x)

    return DCProblem(
        dim=quad.dim,
        prox_f=lambda beta, x: prox_quadratic(quad, beta, x),
        prox_g=lambda beta, x: soft_threshold(x, beta * l1_weight),
        grad_h=lambda x: grad_huber(x, huber),
        objective=objective,
        strong_convexity_rho=quad.strong_convexity(),
        lipschitz_L=huber.lipschitz,
        name=name,
        parts={"f": quad, "h": huber, "l1_weight": l1_weight},
    )


def build_quad_l1_huber(spec):
    s_q, s_c, s_d = child_seeds(spec.seed, 3)
    if spec.spd:
        G = gaussian_matrix(spec.N, spec.N, s_q)
        Q = G.T @ G + spec.spd_shift * np.eye(spec.N)
    else:
        Q = gaussian_matrix(spec.M, spec.N, s_q)
    c = gaussian_vector(spec.N, s_c)
    d = float(gaussian_vector(1, s_d)[0])
    return quad_l1_huber_problem(Q, c, d, spec.delta, spec.l1_weight,
                                 name=f"quad_l1_huber_{spec.M}x{spec.N}")


def rls_log_problem(A, b, mu, epsilon, solver="lu", name="rls_log"):
    ls = LeastSquaresProx(A, b, method=solver)
    reg = LogRegularizer(mu, epsilon)
    weight = reg.l1_weight

    def objective(w):
        return ls.value(w) + weight * l1_norm(w) - reg.value(w)

    AtA_min = float(np.linalg.eigvalsh(ls.A.T @ ls.A).min())
    return DCProblem(
        dim=ls.A.shape[1],
        prox_f=ls,
        prox_g=lambda beta, w: soft_threshold(w, beta * weight),
        grad_h=lambda w: grad_log_regularizer(w, reg),
        objective=objective,
        strong_convexity_rho=max(AtA_min, 0.0),
        lipschitz_L=reg.lipschitz,
        name=name,
        parts={"f": ls, "h": reg, "A": ls.A, "b": ls.b},
    )


def build_rls_log(spec):
    s_a, s_b = child_seeds(spec.seed, 2)
    A = gaussian_matrix(spec.m, spec.N, s_a, normalize_columns=True)
    b = gaussian_vector(spec.m, s_b)
    while not np.any(b):  # pragma: no cover - measure-zero event
        s_b += 1
        b = gaussian_vector(spec.m, s_b)
    return rls_log_problem(A, b, spec.mu, spec.epsilon, spec.solver,
                           name=f"rls_log_{spec.m}x{spec.N}")


def build_svm(spec, train):
    """DC model of the l1-regularized linear SVM on the stacked variable ``(w, b)``.

    ``f(w, b) = q ||w||^2 + C sum hinge``, ``g = lam ||w||_1`` and
    ``h = 1/2 ||w||^2``; the bias is left out of ``g`` and ``h``.
    """
    X = np.asarray(train.X, dtype=np.float64)
    y = np.asarray(train.y, dtype=np.float64)
    if not np.all(np.abs(y) == 1):
        raise ValueError("training labels must be +1 or -1")
    hq = HingeQuadraticFn(X, y, spec.C, spec.quad_coeff)
    d = X.shape[1]
    lam = spec.lam
    stats_key = "hinge_prox_not_converged"

    def prox_f(beta, p):
        res = hinge_quadratic_dual_cd(hq, beta, p[:d], p[d])
        if not res.converged:
            problem.stats[stats_key] += 1
        return np.append(res.w, res.b)

    def prox_g(beta, p):
        out = np.array(p, dtype=np.float64)
        out[:d] = soft_threshold(out[:d], beta * lam)
        return out

    def grad_h(p):
        out = np.array(p, dtype=np.float64)
        out[d] = 0.0
        return out

    def objective(p):
        w = p[:d]
        return hq.value(w, p[d]) + lam * l1_norm(w) - 0.5 * float(w @ w)

    problem = DCProblem(
        dim=d + 1, prox_f=prox_f, prox_g=prox_g, grad_h=grad_h, objective=objective,
        strong_convexity_rho=0.0, lipschitz_L=1.0, name="svm_l1",
        parts={"f": hq, "lam": lam},
    )
    return problem


def predict_svm(w, b, X):
    """Labels ``sign(X w + b)`` with ``sign(0) = +1``."""
    X = np.asarray(X, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if X.shape[1] != w.shape[0]:
        raise ValueError(f"X has {X.shape[1]} features, w has {w.shape[0]}")
    return np.where(X @ w + b >= 0, 1, -1)
