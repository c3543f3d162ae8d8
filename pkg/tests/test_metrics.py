import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dcsplit.core import StopRule
from dcsplit.errors import EmptyInput
from dcsplit.metrics import ClassificationReport, accuracy, err_measure, mae, mse, precision, rmse


def test_accuracy_examples():
    assert accuracy([1, -1, 1], [1, -1, 1]) == 1.0
    assert accuracy([1, -1], [-1, 1]) == 0.0
    assert accuracy([1, 1, -1, -1], [1, 1, -1, 1]) == 0.75


def test_precision_examples():
    assert precision([1, 1], [1, 1]) == 1.0
    assert precision([1, -1], [1, 1]) == 0.5
    assert precision([1, 1, -1], [-1, -1, -1]) == 1.0


def test_errors_zero_on_match():
    y = [1, -1, -1, 1]
    assert mae(y, y) == mse(y, y) == rmse(y, y) == 0.0


def test_published_row_arithmetic():
    # 0.9348 accuracy on a 138-row test set is 9 mistakes
    n, wrong = 138, 9
    y = np.ones(n)
    yhat = y.copy()
    yhat[:wrong] = -1
    r = ClassificationReport.from_predictions(y, yhat)
    assert round(r.accuracy, 4) == 0.9348
    assert round(r.mae, 4) == 0.1304
    assert round(r.mse, 4) == 0.2609
    assert round(r.rmse, 4) == 0.5108


def test_identities_exhaustive_small():
    for n in range(1, 7):
        for t in itertools.product((-1, 1), repeat=n):
            for p in itertools.product((-1, 1), repeat=n):
                r = ClassificationReport.from_predictions(t, p)
                assert r.identity_violation() <= 1e-12
                assert 0 <= r.accuracy <= 1 and 0 <= r.precision <= 1


@given(st.lists(st.tuples(st.sampled_from([-1, 1]), st.sampled_from([-1, 1])),
                min_size=1, max_size=200), st.randoms())
def test_metrics_permutation_invariant(pairs, rnd):
    t, p = map(np.array, zip(*pairs))
    perm = list(range(len(t)))
    rnd.shuffle(perm)
    a = ClassificationReport.from_predictions(t, p)
    b = ClassificationReport.from_predictions(t[perm], p[perm])
    assert a == b
    assert abs(a.rmse ** 2 - a.mse) <= 1e-12


def test_empty_and_mismatch():
    for fn in (accuracy, precision, mae, mse, rmse):
        with pytest.raises(EmptyInput):
            fn([], [])
    with pytest.raises(ValueError):
        accuracy([1, 1], [1])


def test_degenerate_precision_flag():
    r = ClassificationReport.from_predictions([1, -1], [-1, -1])
    assert r.precision == 1.0 and r.precision_degenerate


def test_err_measure():
    x = np.array([1.0, 2.0])
    for kind in ("squared", "relative", "absolute"):
        assert err_measure(StopRule(kind, 1), x, x) == 0.0
    new = np.array([6.0, 8.0])
    old = new + np.array([0.3, 0.4])
    assert err_measure(StopRule("relative", 1), new, old) == pytest.approx(0.05)
    assert err_measure(StopRule("squared", 1), new, old) == pytest.approx(0.25)
    assert math.isclose(err_measure(StopRule("absolute", 1), new, old), 0.5)
