"""Problem bundle, solver configuration, iterate state and run traces."""

import csv
import io
import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConfigError, NonFinite

SATISFIED, VIOLATED, UNKNOWN = "satisfied", "violated", "unknown"


@dataclass(frozen=True, eq=False)
class DCProblem:
    """Oracle bundle for ``p(x) = f(x) + g(x) - h(x)``.

    ``prox_f`` and ``prox_g`` are called as ``prox(beta, point)``; ``grad_h``
    and ``objective`` take a point. ``strong_convexity_rho`` is the modulus
    of ``f + g``; ``lipschitz_L`` is the Lipschitz constant of ``grad_h``.
    ``stats`` collects inner-solver failure counts from the oracles.
    """

    dim: int
    prox_f: Callable
    prox_g: Callable
    grad_h: Callable
    objective: Callable
    strong_convexity_rho: Optional[float] = None
    lipschitz_L: Optional[float] = None
    name: str = ""
    parts: dict = field(default_factory=dict, repr=False)
    stats: Counter = field(default_factory=Counter, repr=False)

    @property
    def assumption_satisfied(self):
        if self.strong_convexity_rho is None or self.lipschitz_L is None:
            return None
        return 2 * self.strong_convexity_rho > self.lipschitz_L


def evaluate_objective(problem, x):
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (problem.dim,):
        raise ValueError(f"expected a vector of length {problem.dim}, got {x.shape}")
    with np.errstate(over="ignore", invalid="ignore"):
        val = float(problem.objective(x))
    if not math.isfinite(val):
        raise NonFinite(f"objective evaluated to {val}")
    return val


# -- schedules ---------------------------------------------------------------

@dataclass(frozen=True)
class KappaSchedule:
    """Relaxation sequence ``kappa_n``.

    ``constant``: ``kappa_n = value``. ``ratio``: ``kappa_n = n / (n + value)``.
    Schedules are evaluated from ``n = 1``, which keeps the ratio rule away
    from zero.
    """

    kind: str = "constant"
    value: float = 1.0

    def __post_init__(self):
        if self.kind == "constant":
            if not 0 < self.value < 2:
                raise ConfigError(f"kappa must lie in (0, 2), got {self.value}")
        elif self.kind == "ratio":
            if not self.value > 0:
                raise ConfigError("ratio offset must be positive")
        else:
            raise ConfigError(f"unknown kappa schedule {self.kind!r}")

    @classmethod
    def constant(cls, value):
        return cls("constant", value)

    @classmethod
    def ratio(cls, offset):
        return cls("ratio", offset)

    def __call__(self, n):
        if self.kind == "constant":
            return self.value
        return n / (n + self.value)

    def bounds(self):
        """Infimum and supremum over ``n >= 1``."""
        if self.kind == "constant":
            return self.value, self.value
        return 1.0 / (1.0 + self.value), 1.0


@dataclass(frozen=True)
class AlphaSchedule:
    """Averaging weights ``alpha_n`` in ``[0, 1)``.

    ``constant``: ``alpha_n = value``. ``harmonic``: ``alpha_n = value / (n + 1)``,
    evaluated from ``n = 1``.
    """

    kind: str = "constant"
    value: float = 0.0

    def __post_init__(self):
        if self.kind == "constant":
            if not 0 <= self.value < 1:
                raise ConfigError(f"alpha must lie in [0, 1), got {self.value}")
        elif self.kind == "harmonic":
            if not 0 <= self.value < 2:
                raise ConfigError("harmonic scale must lie in [0, 2)")
        else:
            raise ConfigError(f"unknown alpha schedule {self.kind!r}")

    @classmethod
    def constant(cls, value):
        return cls("constant", value)

    @classmethod
    def harmonic(cls, scale=1.0):
        return cls("harmonic", scale)

    def __call__(self, n):
        if self.kind == "constant":
            return self.value
        return self.value / (n + 1)


# -- stopping ----------------------------------------------------------------

STOP_KINDS = ("squared", "relative", "absolute")


@dataclass(frozen=True)
class StopRule:
    """``squared``: ``||dx||^2``; ``relative``: ``||dx|| / max(1, ||x_new||)``;
    ``absolute``: ``||dx||``. Fires when the measure drops below ``tol``."""

    kind: str = "absolute"
    tol: float = 1e-6

    def __post_init__(self):
        if self.kind not in STOP_KINDS:
            raise ConfigError(f"unknown stop rule {self.kind!r}")
        if not self.tol > 0:
            raise ConfigError("stopping tolerance must be positive")

    def measure(self, x_new, x_old):
        step = float(np.linalg.norm(np.asarray(x_new) - np.asarray(x_old)))
        if self.kind == "squared":
            return step * step
        if self.kind == "relative":
            return step / max(1.0, float(np.linalg.norm(x_new)))
        return step

    def fired(self, err):
        return err < self.tol


@dataclass(frozen=True)
class SolverConfig:
    """Parameters shared by all methods; each method reads the fields it needs.

    ``gdcp_alpha`` is carried for completeness only: the unified DR baseline
    has no averaging parameter and ignores it.
    """

    beta: float = 1.0
    theta: float = 0.0
    alpha: AlphaSchedule = AlphaSchedule()
    kappa: KappaSchedule = KappaSchedule()
    max_iter: int = 1000
    stop_rule: StopRule = StopRule()
    seed: int = 0
    record_objective: bool = True
    record_iterates: bool = False
    gdcp_alpha: Optional[float] = None

    def __post_init__(self):
        if not self.beta > 0:
            raise ConfigError(f"beta must be positive, got {self.beta}")
        if not self.theta >= 0:
            raise ConfigError(f"theta must be non-negative, got {self.theta}")
        if self.max_iter < 0:
            raise ConfigError("max_iter must be non-negative")
        if self.alpha.kind == "harmonic" and self.alpha(1) >= 1:
            raise ConfigError("harmonic alpha schedule leaves [0, 1) at n = 1")

    def replace(self, **changes):
        d = {f: getattr(self, f) for f in self.__dataclass_fields__}
        d.update(changes)
        return SolverConfig(**d)


def check_assumption(problem, config=None):
    """Report the convergence hypotheses ``2 rho > L`` and ``0 < kappa_n < 2``.

    Purely informational: solving never depends on the outcome.
    """
    ok = problem.assumption_satisfied
    report = {"strong_convexity": UNKNOWN if ok is None else (SATISFIED if ok else VIOLATED)}
    if config is not None:
        lo, hi = config.kappa.bounds()
        report["kappa"] = SATISFIED if 0 < lo and hi < 2 else VIOLATED
    return report


# -- iterates and traces -------------------------------------------------------

@dataclass
class IterateState:
    """Current iterate. For ADMM, ``z`` is the splitting copy and ``v`` holds
    the scaled dual; for DCA, ``u`` is the inner Douglas-Rachford variable."""

    n: int
    x: np.ndarray
    v: np.ndarray
    u: Optional[np.ndarray] = None
    y: Optional[np.ndarray] = None
    z: Optional[np.ndarray] = None
    inner_iterations: int = 0


@dataclass
class TraceRow:
    """One iteration. ``err`` is the governing stop measure; the squared and
    relative step measures are always recorded alongside it."""

    n: int
    err: float
    err_squared: float
    err_relative: float
    objective: Optional[float]
    time_s: float
    step_norm: float
    gap_norm: float
    lyap_c: Optional[float] = None
    lyap_a: Optional[float] = None


TRACE_HEADER = ["n", "err", "err_squared", "err_relative", "objective", "time_s",
                "step_norm", "gap_norm", "lyap_c", "lyap_a"]


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass
class RunTrace:
    rows: list = field(default_factory=list)
    converged: bool = False
    total_iterations: int = 0
    total_seconds: float = 0.0
    r1: Optional[float] = None
    r2: Optional[float] = None
    inner_failures: dict = field(default_factory=dict)

    def column(self, name):
        return np.array([np.nan if getattr(r, name) is None else getattr(r, name)
                         for r in self.rows], dtype=float)

    def to_csv(self, path=None):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TRACE_HEADER)
        for r in self.rows:
            w.writerow([_fmt(getattr(r, k)) for k in TRACE_HEADER])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text

    def summary(self):
        return {
            "converged": self.converged,
            "total_iterations": self.total_iterations,
            "total_seconds": self.total_seconds,
            "r1": self.r1,
            "r2": self.r2,
            "final_err": self.rows[-1].err if self.rows else None,
            "inner_failures": dict(self.inner_failures),
        }

    def to_json(self, path=None):
        text = json.dumps(self.summary(), indent=2, sort_keys=True)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text + "\n")
        return text

    @classmethod
    def read_csv(cls, path):
        rows = []
        with open(path, newline="") as fh:
            for rec in csv.DictReader(fh):
                opt = lambda k: float(rec[k]) if rec[k] else None  # noqa: E731
                rows.append(TraceRow(int(rec["n"]), float(rec["err"]), float(rec["err_squared"]),
                                     float(rec["err_relative"]), opt("objective"),
                                     float(rec["time_s"]), float(rec["step_norm"]),
                                     float(rec["gap_norm"]), opt("lyap_c"), opt("lyap_a")))
        return cls(rows=rows, total_iterations=len(rows))


def config_snapshot(config):
    d = asdict(config)
    return d
