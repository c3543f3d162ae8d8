"""Iterative methods for DC programs behind one stepping interface.

Five methods are available:

* ``DRS_THETA`` -- Douglas-Rachford with a running average ``v_n`` mixed into
  the anchor point through a fixed weight ``theta``;
* ``DRS_ALPHA`` -- Douglas-Rachford where ``x_n`` and ``v_n`` exchange mass
  with weights ``alpha_n``;
* ``GDCP`` -- the plain unified Douglas-Rachford iteration (both of the above
  reduce to it for ``theta = 0`` / ``alpha_n = 0``);
* ``DCA`` -- linearize ``h`` and solve the convex remainder with an inner
  Douglas-Rachford loop;
* ``ADMM`` -- two-block ADMM on ``f(x) + g(z) - <grad h, z>`` with ``x = z``.
"""

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .core import IterateState, RunTrace, SolverConfig, TraceRow, evaluate_objective
from .errors import ConfigError, NonFinite, NotConverged


class MethodTag(str, Enum):
    DRS_THETA = "DRS_THETA"
    DRS_ALPHA = "DRS_ALPHA"
    GDCP = "GDCP"
    DCA = "DCA"
    ADMM = "ADMM"


@dataclass(frozen=True)
class Method:
    tag: MethodTag
    admm_penalty: float = 1.0
    dca_inner_budget: int = 500
    dca_inner_tol: float = 1e-8

    def __post_init__(self):
        object.__setattr__(self, "tag", MethodTag(self.tag))
        if not self.admm_penalty > 0:
            raise ConfigError("ADMM penalty must be positive")
        if self.dca_inner_budget < 1:
            raise ConfigError("DCA inner budget must be positive")

    @property
    def label(self):
        return self.tag.value


@dataclass
class RunResult:
    x: np.ndarray
    trace: RunTrace
    method: Method
    config: SolverConfig
    final_state: IterateState
    iterates: Optional[list] = None
    lyapunov: dict = field(default_factory=dict)

    @property
    def converged(self):
        return self.trace.converged

    @property
    def iterations(self):
        return self.trace.total_iterations


# -- steps -------------------------------------------------------------------

def _dr_core(problem, beta, u, kappa):
    y = problem.prox_f(beta, u)
    z = problem.prox_g(beta, 2 * y - u + beta * problem.grad_h(y))
    return y, z, u + kappa * (z - y)


def drs_theta_step(state, problem, config):
    """One averaged DR step with fixed weight ``theta``."""
    th = config.theta
    kappa = config.kappa(state.n + 1)
    u = (state.x + th * state.v) / (1 + th)
    y, z, x_new = _dr_core(problem, config.beta, u, kappa)
    v_new = (x_new + th * state.v) / (1 + th)
    return IterateState(state.n + 1, x_new, v_new, u, y, z)


def drs_alpha_step(state, problem, config):
    """One DR step with the ``alpha_n`` exchange between ``x_n`` and ``v_n``."""
    a = config.alpha(state.n + 1)
    kappa = config.kappa(state.n + 1)
    u = (1 - a) * state.x + a * state.v
    y, z, x_new = _dr_core(problem, config.beta, u, kappa)
    v_new = (1 - a) * state.v + a * state.x
    return IterateState(state.n + 1, x_new, v_new, u, y, z)


def gdcp_step(state, problem, config):
    kappa = config.kappa(state.n + 1)
    y, z, x_new = _dr_core(problem, config.beta, state.x, kappa)
    return IterateState(state.n + 1, x_new, x_new, state.x, y, z)


def dca_step(state, problem, config, method=Method(MethodTag.DCA)):
    """Linearize ``h`` at ``x_n`` and minimize ``f + g - <grad h(x_n), .>``.

    The convex subproblem is solved by Douglas-Rachford on ``f`` and the
    tilted ``g`` (its prox is ``prox_g`` evaluated at a shifted point), warm
    started from the previous inner variable. If the inexact solution does
    not decrease ``p``, the step is rejected and ``x_n`` kept.
    """
    beta = config.beta
    x = state.x
    s = problem.grad_h(x)
    w = x if state.u is None else state.u
    y = z = x
    k = 0
    for k in range(1, method.dca_inner_budget + 1):
        y = problem.prox_f(beta, w)
        z = problem.prox_g(beta, 2 * y - w + beta * s)
        w = w + (z - y)
        if np.linalg.norm(z - y) < method.dca_inner_tol:
            break
    else:
        problem.stats["dca_inner_not_converged"] += 1
    x_new = z
    if problem.objective(x_new) > problem.objective(x) + 1e-8:
        problem.stats["dca_step_rejected"] += 1
        x_new = x
    return IterateState(state.n + 1, x_new, x_new, w, y, z, inner_iterations=k)


def admm_step(state, problem, config, method=Method(MethodTag.ADMM)):
    """One scaled-form ADMM round.

    With ``t = 1/penalty``, ``d`` the scaled dual (kept in ``state.v``) and
    ``z`` the splitting copy::

        x+ = prox_{t f}(z - d)
        z+ = prox_{t g}(x+ + d + t * grad_h(x+))   # h linearized at x+
        d+ = d + x+ - z+
    """
    t = 1.0 / method.admm_penalty
    z_old = state.z if state.z is not None else state.x
    d = state.v
    x_new = problem.prox_f(t, z_old - d)
    z_new = problem.prox_g(t, x_new + d + t * problem.grad_h(x_new))
    d_new = d + x_new - z_new
    # u carries the prox_f argument so residuals can recover a subgradient of f
    return IterateState(state.n + 1, x_new, d_new, z_old - d, x_new, z_new)


_STEPS = {
    MethodTag.DRS_THETA: drs_theta_step,
    MethodTag.DRS_ALPHA: drs_alpha_step,
    MethodTag.GDCP: gdcp_step,
}


def step(state, problem, config, method):
    tag = method.tag
    if tag in _STEPS:
        return _STEPS[tag](state, problem, config)
    if tag is MethodTag.DCA:
        return dca_step(state, problem, config, method)
    return admm_step(state, problem, config, method)


# -- residuals ---------------------------------------------------------------

def stationarity_residuals(x, u, problem, beta):
    """Distances ``r1 = ||x - prox_f(u)||`` and ``r2 = ||x - prox_g(2x - u + beta grad_h(x))||``.

    Both vanish exactly when ``x`` is stationary and ``u`` is a matching
    fixed point of the Douglas-Rachford map.
    """
    x = np.asarray(x, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    r1 = np.linalg.norm(x - problem.prox_f(beta, u))
    r2 = np.linalg.norm(x - problem.prox_g(beta, 2 * x - u + beta * problem.grad_h(x)))
    return float(r1), float(r2)


def stationary_pair(state, problem, config, method):
    """Candidate ``(x*, u*)`` for :func:`stationarity_residuals` from a final state."""
    beta = config.beta
    tag = method.tag
    if tag is MethodTag.ADMM:
        if state.u is None:
            return state.x, state.x
        t = 1.0 / method.admm_penalty
        # (z - d - x)/t is a subgradient of f at x
        return state.x, state.x + beta * (state.u - state.x) / t
    if tag is MethodTag.DCA:
        u = state.x if state.u is None else state.u
        return problem.prox_f(beta, u), u
    x = state.y if state.y is not None else problem.prox_f(beta, state.x)
    return x, state.x


# -- driver ------------------------------------------------------------------

def solve(problem, method, config, x0, v0=None):
    """Iterate ``method`` from ``(x0, v0)`` until the stop rule fires or ``max_iter``.

    Row ``n`` of the trace describes the transition to ``x_n``: ``err`` is the
    stop measure between ``x_n`` and ``x_{n-1}``, ``step_norm`` is
    ``||z - y||`` of that step and ``gap_norm`` is ``||x_n - v_n||``.

    Raises
    ------
    NonFinite
        If an iterate or the objective stops being finite. The partially
        filled result is attached as ``exc.partial_result``.
    """
    if not isinstance(method, Method):
        method = Method(method)
    x0 = np.array(x0, dtype=np.float64)
    if x0.shape != (problem.dim,):
        raise ValueError(f"x0 must have length {problem.dim}")
    v0 = x0.copy() if v0 is None else np.array(v0, dtype=np.float64)
    if method.tag is MethodTag.ADMM:
        state = IterateState(0, x0, np.zeros_like(x0), z=x0.copy())
    elif method.tag in (MethodTag.DCA, MethodTag.GDCP):
        state = IterateState(0, x0, x0.copy())
    else:
        state = IterateState(0, x0, v0)

    trace = RunTrace()
    iterates = [(state.x, state.v)] if config.record_iterates else None
    stats_before = dict(problem.stats)
    rule = config.stop_rule
    t0 = time.perf_counter()
    result = RunResult(state.x, trace, method, config, state, iterates)

    for _ in range(config.max_iter):
        new = step(state, problem, config, method)
        if not np.all(np.isfinite(new.x)):
            exc = NonFinite(f"{method.label}: iterate became non-finite at n={new.n}")
            exc.partial_result = result
            raise exc
        err = rule.measure(new.x, state.x)
        dx = float(np.linalg.norm(new.x - state.x))
        err_rel = dx / max(1.0, float(np.linalg.norm(new.x)))
        obj = evaluate_objective(problem, new.x) if config.record_objective else None
        if method.tag is MethodTag.ADMM:
            step_norm = float(np.linalg.norm(new.x - new.z))
        else:
            step_norm = float(np.linalg.norm(new.z - new.y))
        trace.rows.append(TraceRow(new.n, err, dx * dx, err_rel, obj, time.perf_counter() - t0,
                                   step_norm, float(np.linalg.norm(new.x - new.v))))
        state = new
        result.x, result.final_state = state.x, state
        if iterates is not None:
            iterates.append((state.x, state.v))
        if rule.fired(err):
            trace.converged = True
            break

    trace.total_iterations = len(trace.rows)
    trace.total_seconds = time.perf_counter() - t0
    xs, us = stationary_pair(state, problem, config, method)
    trace.r1, trace.r2 = stationarity_residuals(xs, us, problem, config.beta)
    trace.inner_failures = {k: v - stats_before.get(k, 0) for k, v in problem.stats.items()
                            if v != stats_before.get(k, 0)}
    return result


# -- reference point and Lyapunov monitors -------------------------------------

def estimate_reference(result, problem=None, beta=None):
    """Limit estimate ``(x_bar, y_bar)`` from a converged run.

    ``x_bar`` is the last ``prox_f`` output and ``y_bar`` the last anchor
    point ``u``; at a fixed point ``prox_f(y_bar) = x_bar``.
    """
    if not result.converged:
        raise NotConverged("reference point needs a converged run")
    st = result.final_state
    if st.y is None or st.u is None:
        raise NotConverged("run produced no iterates")
    return st.y.copy(), st.u.copy()


def lyapunov_c(iterates, y_bar, theta):
    """``c_n = |x_n - y|^2/(1+theta) + theta |v_n - y|^2 + theta^2/(1+theta)^2 |x_n - v_{n-1}|^2``.

    ``v_{-1}`` is taken as ``x_0`` so the last term vanishes at ``n = 0``.
    """
    out = np.empty(len(iterates))
    w = theta ** 2 / (1 + theta) ** 2
    v_prev = iterates[0][0]
    for n, (x, v) in enumerate(iterates):
        out[n] = (np.sum((x - y_bar) ** 2) / (1 + theta) + theta * np.sum((v - y_bar) ** 2)
                  + w * np.sum((x - v_prev) ** 2))
        v_prev = v
    return out


def lyapunov_a(iterates, y_bar):
    """``a_n = |x_n - y|^2 + |v_n - y|^2``."""
    return np.array([np.sum((x - y_bar) ** 2) + np.sum((v - y_bar) ** 2) for x, v in iterates])


def backfill_lyapunov(result, y_bar):
    """Fill the ``lyap_c`` / ``lyap_a`` trace columns from stored iterates.

    ``c_n`` is computed for the theta-averaged method (and for GDCP, with
    ``theta = 0``); ``a_n`` for the alpha method. The full sequences,
    including ``n = 0``, are kept in ``result.lyapunov``.
    """
    if result.iterates is None:
        raise ValueError("run with record_iterates=True to back-fill Lyapunov values")
    tag = result.method.tag
    rows = result.trace.rows
    if tag in (MethodTag.DRS_THETA, MethodTag.GDCP):
        theta = result.config.theta if tag is MethodTag.DRS_THETA else 0.0
        c = lyapunov_c(result.iterates, y_bar, theta)
        result.lyapunov["c"] = c
        for r in rows:
            r.lyap_c = float(c[r.n])
    if tag is MethodTag.DRS_ALPHA:
        a = lyapunov_a(result.iterates, y_bar)
        result.lyapunov["a"] = a
        for r in rows:
            r.lyap_a = float(a[r.n])
    return result.lyapunov


def inertial_equivalent_u(x_n, v_n, alpha):
    """Anchor point of the inertial form with ``theta_n = (1 - 2 alpha)/alpha``.

    Returns ``v_{n+1} + theta_n (v_{n+1} - v_n)`` with
    ``v_{n+1} = (1 - alpha) v_n + alpha x_n``, which equals
    ``(1 - alpha) x_n + alpha v_n``.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    x_n = np.asarray(x_n, dtype=np.float64)
    v_n = np.asarray(v_n, dtype=np.float64)
    # v_{n+1} - v_n is formed as alpha (x_n - v_n) so theta does not amplify rounding
    delta = alpha * (x_n - v_n)
    v_next = v_n + delta
    theta = (1 - 2 * alpha) / alpha
    return v_next + theta * delta
