"""KNN classification accuracy on embeddings."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.spatial.distance import cdist

from .types import make_rng


class SplitIndices(NamedTuple):
    train: np.ndarray
    test: np.ndarray


def train_test_split(n: int, frac: float, seed=0) -> SplitIndices:
    """Random split with ``round(frac * n)`` training indices."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if not 0 < frac < 1:
        raise ValueError(f"frac must lie in (0, 1), got {frac}")
    n_train = int(round(frac * n))
    if n_train == 0 or n_train == n:
        raise ValueError(f"frac={frac} leaves one side of the split empty for n={n}")
    perm = make_rng(seed).permutation(n)
    return SplitIndices(np.sort(perm[:n_train]), np.sort(perm[n_train:]))


def _vote(labels: np.ndarray) -> int:
    values, counts = np.unique(labels, return_counts=True)
    # np.unique sorts, so argmax picks the smallest label among tied counts
    return int(values[np.argmax(counts)])


def knn_predict(train_x, train_y, query, k: int) -> int:
    """Majority label of the ``k`` nearest training points.

    Distance ties go to the lower training index, vote ties to the smaller
    label.
    """
    return int(knn_predict_many(train_x, train_y, np.atleast_2d(query), k)[0])


def knn_predict_many(train_x, train_y, queries, k: int) -> np.ndarray:
    train_x = np.asarray(train_x, dtype=np.float64)
    train_y = np.asarray(train_y)
    if len(train_x) == 0:
        raise ValueError("empty training set")
    if not 1 <= k <= len(train_x):
        raise ValueError(f"k must lie in [1, {len(train_x)}], got {k}")
    d = cdist(np.asarray(queries, dtype=np.float64), train_x)
    nearest = np.argsort(d, axis=1, kind="stable")[:, :k]
    return np.array([_vote(train_y[row]) for row in nearest], dtype=train_y.dtype)


def accuracy(pred, truth) -> float:
    pred, truth = np.asarray(pred), np.asarray(truth)
    if pred.shape != truth.shape:
        raise ValueError(f"length mismatch: {pred.shape} vs {truth.shape}")
    if pred.size == 0:
        raise ValueError("no predictions")
    return float(np.mean(pred == truth))


def knn_accuracy_table(x, y, ks, train_frac: float = 0.9, seed=0) -> dict[int, float]:
    """Held-out accuracy for each K on one shared split."""
    x, y = np.asarray(x, dtype=np.float64), np.asarray(y)
    split = train_test_split(len(y), train_frac, seed)
    out = {}
    for k in ks:
        pred = knn_predict_many(x[split.train], y[split.train], x[split.test], k)
        out[int(k)] = accuracy(pred, y[split.test])
    return out
