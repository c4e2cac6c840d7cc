import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csmds.evaluation import (
    accuracy,
    knn_accuracy_table,
    knn_predict,
    knn_predict_many,
    train_test_split,
)


def test_split_3000_at_90_percent():
    s = train_test_split(3000, 0.9, seed=0)
    assert (len(s.train), len(s.test)) == (2700, 300)


def test_split_half():
    s = train_test_split(10, 0.5, seed=1)
    assert len(s.train) == len(s.test) == 5
    assert not set(s.train) & set(s.test)


def test_split_seeded():
    a, b = train_test_split(50, 0.9, seed=3), train_test_split(50, 0.9, seed=3)
    assert np.array_equal(a.train, b.train) and np.array_equal(a.test, b.test)


@pytest.mark.parametrize("n, frac", [(1, 0.5), (10, 0.0), (10, 1.0), (10, 0.01), (10, 0.99)])
def test_split_degenerate(n, frac):
    with pytest.raises(ValueError):
        train_test_split(n, frac)


@settings(max_examples=50)
@given(st.integers(2, 500), st.floats(0.05, 0.95), st.integers(0, 2**31))
def test_split_partition(n, frac, seed):
    k = round(frac * n)
    if k in (0, n):
        return
    s = train_test_split(n, frac, seed)
    assert len(s.train) == k
    assert sorted(np.concatenate([s.train, s.test]).tolist()) == list(range(n))


def test_knn_exact_match():
    x = np.array([[0.0, 0], [5, 5], [9, 1]])
    assert knn_predict(x, [4, 7, 2], [5, 5], 1) == 7


def test_knn_majority():
    x = np.array([[0.0], [1], [2], [50]])
    assert knn_predict(x, [1, 1, 9, 9], [0.5], 3) == 1


def test_knn_distance_tie_lower_index():
    x = np.array([[-1.0], [1.0]])
    assert knn_predict(x, [3, 8], [0.0], 1) == 3
    assert knn_predict(x[::-1], [8, 3], [0.0], 1) == 8


def test_knn_vote_tie_smallest_label():
    x = np.array([[1.0], [2], [3], [4]])
    assert knn_predict(x, [7, 2, 7, 2], [0.0], 4) == 2


def test_knn_blobs():
    rng = np.random.default_rng(0)
    x = np.vstack([rng.normal(0, 0.5, (100, 2)), rng.normal(10, 0.5, (100, 2))])
    y = np.repeat([0, 1], 100)
    acc = knn_accuracy_table(x, y, [5], train_frac=0.8, seed=1)
    assert acc == {5: 1.0}


def test_knn_errors():
    with pytest.raises(ValueError):
        knn_predict(np.zeros((0, 2)), [], [0, 0], 1)
    with pytest.raises(ValueError):
        knn_predict(np.zeros((2, 2)), [0, 1], [0, 0], 3)


def test_accuracy_examples():
    assert accuracy([1, 2, 3], [1, 2, 3]) == 1.0
    assert accuracy([1, 2], [3, 4]) == 0.0
    assert accuracy([1, 2, 3, 4], [1, 2, 3, 0]) == 0.75
    with pytest.raises(ValueError):
        accuracy([1], [1, 2])


@settings(max_examples=30)
@given(st.integers(0, 10**6))
def test_knn_permutation_invariance(seed):
    rng = np.random.default_rng(seed)
    x, y, q = rng.normal(size=(30, 3)), rng.integers(0, 4, 30), rng.normal(size=(10, 3))
    perm = rng.permutation(30)
    for k in (1, 3, 7):
        assert np.array_equal(knn_predict_many(x, y, q, k), knn_predict_many(x[perm], y[perm], q, k))


def test_knn_full_k_is_global_majority():
    rng = np.random.default_rng(2)
    x, y = rng.normal(size=(21, 2)), np.array([0] * 6 + [1] * 9 + [2] * 6)
    assert set(knn_predict_many(x, y, rng.normal(size=(15, 2)), 21)) == {1}
