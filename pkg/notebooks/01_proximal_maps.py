"""
Proximal maps and their oracles
===============================

Every prox in the package solves  argmin_u phi(u) + |u - x|^2 / (2 beta).
This script evaluates each one and compares it with a brute-force check.
"""

import numpy as np

from dcsplit.prox import (HingeQuadraticFn, QuadraticFn, hinge_quadratic_dual_cd,
                          prox_least_squares, prox_quadratic, soft_threshold)

rng = np.random.default_rng(0)

# Soft thresholding shrinks toward zero. A fine grid search agrees.
x, lam = 1.7, 0.3
grid = np.arange(-30000, 30001) * 1e-4
print("soft_threshold:", soft_threshold([x], lam)[0],
      "grid:", grid[np.argmin(lam * np.abs(grid) + 0.5 * (grid - x) ** 2)])

# A square quadratic is solved through one LU factor per beta.
G = rng.standard_normal((5, 5))
f = QuadraticFn(G.T @ G + np.eye(5), rng.standard_normal(5))
u = rng.standard_normal(5)
p = prox_quadratic(f, 0.5, u)
print("quadratic prox optimality residual:",
      np.linalg.norm(f.hessian() @ p + f.c + (p - u) / 0.5))

# A rectangular Q is read as 1/2 |Q x|^2 and handled by a pseudo-inverse.
f_rect = QuadraticFn(rng.standard_normal((8, 5)), rng.standard_normal(5))
p = prox_quadratic(f_rect, 0.5, u)
print("rectangular prox optimality residual:",
      np.linalg.norm(f_rect.hessian() @ p + f_rect.c + (p - u) / 0.5))

# Least squares: LU and conjugate gradient agree.
A, b = rng.standard_normal((20, 10)), rng.standard_normal(20)
w = rng.standard_normal(10)
print("LU vs CG gap:", np.max(np.abs(prox_least_squares(A, b, 0.7, w, "lu")
                                     - prox_least_squares(A, b, 0.7, w, "cg"))))

# The hinge prox runs dual coordinate ascent; the dual value only goes up.
X = rng.standard_normal((30, 4))
y = np.where(X[:, 0] > 0, 1.0, -1.0)
res = hinge_quadratic_dual_cd(HingeQuadraticFn(X, y, C=1.0), 0.1, np.zeros(4), 0.0,
                              record_dual=True)
print("hinge prox passes:", res.passes, "converged:", res.converged)
print("dual values (first five):", np.round(res.dual_values[:5], 6))
