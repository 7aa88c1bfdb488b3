import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dimcheck.metrics import MetricError, auc, confusion, evaluate


def brute_auc(labels, scores):
    pos = [s for s, y in zip(scores, labels) if y == 1]
    neg = [s for s, y in zip(scores, labels) if y == 0]
    total = sum(1.0 if p > n else 0.5 if p == n else 0.0 for p, n in itertools.product(pos, neg))
    return total / (len(pos) * len(neg))


def test_confusion_examples():
    assert confusion([1, 1, 0, 0], [1, 0, 0, 1]) == (1, 1, 1, 1)
    tp, fp, tn, fn = confusion([1, 0, 1, 0], [1, 0, 1, 0])
    assert fp == fn == 0
    m = evaluate([1, 0, 1, 1, 0], [1, 1, 0, 1, 0])
    assert m.recall == pytest.approx(2 / 3) and m.false_alarm == 0.5
    assert m.n == 5


def test_confusion_length_mismatch():
    with pytest.raises(MetricError, match="length mismatch"):
        confusion([1, 0], [1])


def test_undefined_rates_are_none():
    m = evaluate([0, 0, 0], [0, 1, 0], [0.1, 0.9, 0.2])
    assert m.recall is None and m.auc is None and m.false_alarm == pytest.approx(1 / 3)
    m = evaluate([1, 1], [1, 0])
    assert m.false_alarm is None and m.recall == 0.5


def test_auc_examples():
    assert auc([1, 0], [0.9, 0.1]) == 1.0
    assert auc([1, 0], [0.5, 0.5]) == 0.5
    assert auc([1, 1, 0, 0], [0.8, 0.3, 0.6, 0.1]) == 0.75


def test_auc_single_class():
    with pytest.raises(MetricError, match="undefined"):
        auc([1, 1], [0.2, 0.3])


labelled = st.integers(2, 12).flatmap(lambda n: st.tuples(
    st.lists(st.integers(0, 1), min_size=n, max_size=n),
    st.lists(st.sampled_from([0.0, 0.1, 0.25, 0.5, 0.7, 1.0, -3.0]), min_size=n, max_size=n)))


@settings(max_examples=300, deadline=None)
@given(labelled)
def test_auc_matches_brute_force(data):
    y, s = data
    if len(set(y)) < 2:
        return
    assert abs(auc(y, s) - brute_auc(y, s)) <= 1e-12
    assert auc(y, np.exp(s)) == auc(y, s)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**16))
def test_auc_complement_without_ties(seed):
    rng = np.random.default_rng(seed)
    n = rng.integers(2, 13)
    y = rng.integers(0, 2, n)
    if len(set(y)) < 2:
        return
    s = rng.permutation(n).astype(float)
    assert auc(y, s) + auc(y, -s) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**16))
def test_rates_permutation_invariant(seed):
    rng = np.random.default_rng(seed)
    y = rng.integers(0, 2, 20)
    p = rng.integers(0, 2, 20)
    perm = rng.permutation(20)
    a, b = evaluate(y, p), evaluate(y[perm], p[perm])
    assert (a.recall, a.false_alarm) == (b.recall, b.false_alarm)
