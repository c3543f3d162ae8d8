"""Classification metrics and the step-size error measure.

On +/-1 labels every mistake contributes ``|y - yhat| = 2``, so
``mae = 2 (1 - accuracy)``, ``mse = 2 mae`` and ``rmse = sqrt(mse)``.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import EmptyInput


def _pair(y_true, y_pred):
    y_true = np.asarray(y_true, dtype=np.float64)
    y_pred = np.asarray(y_pred, dtype=np.float64)
    if y_true.shape != y_pred.shape:
        raise ValueError(f"length mismatch: {y_true.shape} vs {y_pred.shape}")
    if y_true.size == 0:
        raise EmptyInput("metrics need at least one prediction")
    return y_true, y_pred


def accuracy(y_true, y_pred):
    t, p = _pair(y_true, y_pred)
    return float(np.count_nonzero(t == p)) / t.size


def precision(y_true, y_pred):
    """TP / (TP + FP) for the +1 class; 1.0 when nothing is predicted positive."""
    t, p = _pair(y_true, y_pred)
    predicted = p == 1
    if not predicted.any():
        return 1.0
    return float(np.count_nonzero(t[predicted] == 1)) / np.count_nonzero(predicted)


def mae(y_true, y_pred):
    t, p = _pair(y_true, y_pred)
    return float(np.abs(t - p).mean())


def mse(y_true, y_pred):
    t, p = _pair(y_true, y_pred)
    return float(((t - p) ** 2).mean())


def rmse(y_true, y_pred):
    return math.sqrt(mse(y_true, y_pred))


def err_measure(rule, x_new, x_old):
    return rule.measure(x_new, x_old)


@dataclass(frozen=True)
class ClassificationReport:
    accuracy: float
    precision: float
    mae: float
    mse: float
    rmse: float
    time_seconds: float = 0.0
    iterations: int = 0
    precision_degenerate: bool = False

    @classmethod
    def from_predictions(cls, y_true, y_pred, time_seconds=0.0, iterations=0):
        degenerate = not np.any(np.asarray(y_pred) == 1)
        return cls(accuracy(y_true, y_pred), precision(y_true, y_pred), mae(y_true, y_pred),
                   mse(y_true, y_pred), rmse(y_true, y_pred), float(time_seconds),
                   int(iterations), bool(degenerate))

    def identity_violation(self):
        """Largest deviation from the +/-1 label identities (0 when they hold)."""
        return max(abs(self.mae - 2 * (1 - self.accuracy)),
                   abs(self.mse - 2 * self.mae),
                   abs(self.rmse - math.sqrt(self.mse)))

    def as_dict(self):
        return asdict(self)
