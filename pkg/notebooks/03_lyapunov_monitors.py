"""
Lyapunov monitors and the O(1/sqrt(n)) gap rate
===============================================

On a strongly convex instance (2 rho > L) the scalar sequences c_n (DRS-theta)
and a_n (DRS-alpha) decrease monotonically. They are back-filled into the
trace once the limit is estimated from the converged run.
"""

import numpy as np

from dcsplit import KappaSchedule, SolverConfig, StopRule, solve
from dcsplit.core import AlphaSchedule
from dcsplit.linalg import gaussian_vector
from dcsplit.problems import QuadL1HuberSpec, build_quad_l1_huber
from dcsplit.solvers import Method, backfill_lyapunov, estimate_reference

problem = build_quad_l1_huber(QuadL1HuberSpec(1, 30, spd=True, spd_shift=1.0, delta=1.0))
print("rho =", problem.strong_convexity_rho, " L =", problem.lipschitz_L)

x0 = 5 * gaussian_vector(30, 1000)
cfg = SolverConfig(beta=0.1, theta=0.5, alpha=AlphaSchedule.constant(0.3),
                   kappa=KappaSchedule.constant(1.0), max_iter=100000,
                   stop_rule=StopRule("absolute", 1e-13), record_iterates=True)

for tag, key in (("DRS_THETA", "c"), ("DRS_ALPHA", "a")):
    run = solve(problem, Method(tag), cfg, x0, x0)
    _, y_bar = estimate_reference(run)
    seq = backfill_lyapunov(run, y_bar)[key]
    print(f"{tag}: {run.iterations} iterations, {key}_0={seq[0]:.3f}, "
          f"largest increase {np.max(np.diff(seq)):.1e}")

# Rate: (n+1) theta/(1+theta)^2 min_j |x_j - v_j|^2 stays below a constant.
theta = cfg.theta
run =solve(problem, Method("DRS_THETA"), cfg, x0, x0)
_, y_bar = estimate_reference(run)
gaps = np.array([np.sum((x - v) ** 2) for x, v in run.iterates])[1:]
n = np.arange(1, len(gaps) + 1)
lhs = (n + 1) * theta / (1 + theta) ** 2 * np.minimum.accumulate(gaps)
rhs = (1 + theta * (1 + theta)) / (1 + theta) * np.sum((x0 - y_bar) ** 2)
print(f"max scaled gap {lhs.max():.3f} <= bound {rhs:.3f}")
