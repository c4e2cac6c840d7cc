"""Objective and reporting metrics between a target matrix and an embedding."""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .types import Embedding, TargetMatrix


def _values(t) -> np.ndarray:
    return t.values if isinstance(t, TargetMatrix) else np.asarray(t, dtype=np.float64)


def compute_distance_matrix(coords) -> np.ndarray:
    """Pairwise Euclidean distances between the rows of ``coords``."""
    x = np.asarray(coords, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"coords must be 2-D, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("coords contain non-finite values")
    return squareform(pdist(x, "euclidean"))


def raw_stress(t, d) -> float:
    """Sum of squared residuals over all ordered pairs (each pair counted twice)."""
    tv, dv = _values(t), np.asarray(d, dtype=np.float64)
    if tv.shape != dv.shape:
        raise ValueError(f"shape mismatch: {tv.shape} vs {dv.shape}")
    r = tv - dv
    return float(np.sum(r * r))


def stress1(t, d) -> float:
    """Kruskal's Stress-1: sqrt(sum (t - d)^2 / sum d^2)."""
    dv = np.asarray(d, dtype=np.float64)
    denom = float(np.sum(dv * dv))
    if denom == 0.0:
        raise ZeroDivisionError("Stress-1 undefined for an all-zero distance matrix")
    return float(np.sqrt(raw_stress(t, dv) / denom))


def move_delta_stress(t, emb: Embedding, i: int, candidate, stress: float | None = None):
    """Stress after moving point ``i`` to ``candidate``, in O(N L).

    Only the i-th row and column of the distance matrix change, so

        new = old + 2 * sum_{j != i} [(t_ij - d'_ij)^2 - (t_ij - d_ij)^2].

    ``stress`` is the current raw stress; it is recomputed when omitted.
    Returns ``(new_stress, new_row)`` where ``new_row`` holds d'_i.
    """
    n = emb.n
    if not 0 <= i < n:
        raise IndexError(f"point index {i} out of range for N={n}")
    cand = np.asarray(candidate, dtype=np.float64)
    if cand.shape != (emb.l,) or not np.all(np.isfinite(cand)):
        raise ValueError("candidate must be a finite L-vector")
    tv = _values(t)
    if stress is None:
        stress = raw_stress(tv, emb.distances)
    diff = emb.coords - cand
    new_row = np.sqrt(np.einsum("jk,jk->j", diff, diff))
    new_row[i] = 0.0
    old_row = emb.distances[i]
    ti = tv[i]
    terms = (new_row - old_row) * (new_row + old_row - 2.0 * ti)
    terms[i] = 0.0
    return stress + 2.0 * float(terms.sum()), new_row
