"""Dataset loading and preprocessing for the SVM experiments.

Conventions: labels are coded +1/-1; standardization uses train-only
statistics with the population standard deviation (divide by ``n``);
the test share of a split is ``round_half_up(n * test_fraction)``.
"""

import csv
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import MissingColumn, ParseError, SingleClass


@dataclass(frozen=True, eq=False)
class Dataset:
    X: np.ndarray
    y: np.ndarray
    feature_names: tuple = None
    provenance: tuple = field(default_factory=tuple)

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.int64)
        if X.ndim != 2 or X.shape[0] != y.shape[0]:
            raise ValueError("X must be 2-D with one row per label")
        if not np.all(np.abs(y) == 1):
            raise ValueError("labels must be +1 or -1")
        if np.isnan(X).any():
            raise ValueError("X contains NaN")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "provenance", tuple(self.provenance))

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def d(self):
        return self.X.shape[1]

    def subset(self, idx, note=None):
        prov = self.provenance + ((note,) if note else ())
        return replace(self, X=self.X[idx], y=self.y[idx], provenance=prov)

    def class_counts(self):
        return int(np.sum(self.y == 1)), int(np.sum(self.y == -1))


def _same_label(cell, positive):
    if cell == positive:
        return True
    try:
        return float(cell) == float(positive)
    except ValueError:
        return False


def load_csv(path, label_column, positive_label_value, header=True):
    """Read a comma-separated file into a :class:`Dataset`.

    Rows whose label equals ``positive_label_value`` (string match, or numeric
    match when both parse as numbers) become +1; every other row becomes -1.
    Without a header row, ``label_column`` is a column index (negative
    indices count from the end).
    """
    path = str(path)
    positive = str(positive_label_value)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if header:
        if not rows:
            raise MissingColumn(f"{path}: empty file")
        names = [c.strip() for c in rows[0]]
        body = rows[1:]
        first_row = 2
        if str(label_column) not in names:
            raise MissingColumn(f"{path}: no column named {label_column!r}; have {names}")
        li = names.index(str(label_column))
    else:
        body = rows
        first_row = 1
        width = len(body[0]) if body else 0
        names = [str(i) for i in range(width)]
        try:
            li = int(label_column) % width
        except (ValueError, ZeroDivisionError):
            raise MissingColumn(f"{path}: label column {label_column!r} is not a valid index")
    feat_idx = [i for i in range(len(names)) if i != li]
    X = np.empty((len(body), len(feat_idx)))
    y = np.empty(len(body), dtype=np.int64)
    for r, row in enumerate(body):
        lineno = r + first_row
        if len(row) != len(names):
            raise ParseError(path, lineno, "<row>", ",".join(row))
        for k, i in enumerate(feat_idx):
            cell = row[i].strip()
            try:
                val = float(cell)
            except ValueError:
                raise ParseError(path, lineno, names[i], cell) from None
            if math.isnan(val):
                raise ParseError(path, lineno, names[i], cell)
            X[r, k] = val
        y[r] = 1 if _same_label(row[li].strip(), positive) else -1
    note = f"load_csv({path!r}, label={names[li]!r}, {positive!r} -> +1, else -1)"
    return Dataset(X, y, tuple(names[i] for i in feat_idx), (note,))


def standardize(train, test):
    """Z-score both sets with the training mean and population std."""
    if train.n == 0:
        raise ValueError("cannot standardize an empty training set")
    mean = train.X.mean(axis=0)
    std = train.X.std(axis=0)
    safe = np.where(std > 0, std, 1.0)

    def apply(ds):
        Z = (ds.X - mean) / safe
        Z[:, std == 0] = 0.0
        return replace(ds, X=Z, provenance=ds.provenance + ("standardize(train stats)",))

    return apply(train), apply(test)


def undersample_indices(y, seed):
    y = np.asarray(y)
    pos = np.flatnonzero(y == 1)
    neg = np.flatnonzero(y == -1)
    if len(pos) == 0 or len(neg) == 0:
        raise SingleClass("undersampling needs both classes present")
    minority, majority = (pos, neg) if len(pos) <= len(neg) else (neg, pos)
    rng = np.random.Generator(np.random.PCG64(seed))
    keep = rng.choice(majority, size=len(minority), replace=False)
    return np.sort(np.concatenate([minority, keep]))


def undersample_majority(data, seed):
    """Drop majority-class rows at random (without replacement) down to the minority count."""
    idx = undersample_indices(data.y, seed)
    return data.subset(idx, f"undersample_majority(seed={seed})")


@dataclass(frozen=True)
class SplitSpec:
    test_fraction: float
    seed: int = 0
    shuffle: bool = True

    def __post_init__(self):
        if not 0 < self.test_fraction < 1:
            raise ValueError("test_fraction must lie in (0, 1)")


def n_test_rows(n, fraction):
    return int(math.floor(n * fraction + 0.5))


def split_indices(n, spec):
    if n < 2:
        raise ValueError("need at least two rows to split")
    order = (np.random.Generator(np.random.PCG64(spec.seed)).permutation(n)
             if spec.shuffle else np.arange(n))
    k = n_test_rows(n, spec.test_fraction)
    return order[k:], order[:k]


def train_test_split(data, spec):
    """Seeded shuffle then cut; returns ``(train, test)``."""
    tr, te = split_indices(data.n, spec)
    tag = f"split(test={spec.test_fraction}, seed={spec.seed})"
    return data.subset(tr, tag + "[train]"), data.subset(te, tag + "[test]")
