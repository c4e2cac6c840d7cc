"""Reference MDS solvers: classical (Torgerson) scaling and unit-weight SMACOF."""

from __future__ import annotations

import time
import warnings
from typing import NamedTuple

import numpy as np

from .stress import raw_stress
from .types import Embedding, NumericalError, TargetMatrix, TraceRecord, make_rng

JACOBI_MAX_SWEEPS = 100
JACOBI_TOL = 1e-10


def _values(delta) -> np.ndarray:
    return delta.values if isinstance(delta, TargetMatrix) else np.asarray(delta, dtype=np.float64)


def double_center(delta) -> np.ndarray:
    """Gram matrix ``B = -1/2 H (delta**2) H`` with ``H = I - ones/N``."""
    d2 = _values(delta) ** 2
    # H A H without forming H: subtract row and column means, add back the grand mean
    b = d2 - d2.mean(axis=0, keepdims=True) - d2.mean(axis=1, keepdims=True) + d2.mean()
    b *= -0.5
    return 0.5 * (b + b.T)


def _jacobi_eig(a: np.ndarray, max_sweeps: int, tol: float):
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    scale = max(np.linalg.norm(a), 1.0)
    for _ in range(max_sweeps):
        off = np.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
        if off <= tol * scale:
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    raise NumericalError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")


def symmetric_eig(b, method: str = "lapack", max_sweeps: int = JACOBI_MAX_SWEEPS,
                  tol: float = JACOBI_TOL):
    """Eigendecomposition of a symmetric matrix, eigenvalues descending.

    ``method="jacobi"`` runs cyclic Jacobi rotations (dependency-free, fine
    for a few hundred rows); ``"lapack"`` defers to ``numpy.linalg.eigh``.
    Returns ``(eigenvalues, eigenvectors)`` with eigenvectors as columns.
    """
    a = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.T, atol=1e-9, rtol=0):
        raise ValueError("matrix is not symmetric")
    if method == "jacobi":
        w, v = _jacobi_eig(a, max_sweeps, tol)
    elif method == "lapack":
        w, v = np.linalg.eigh(a)
    else:
        raise ValueError(f"unknown method {method!r}")
    order = np.argsort(-w, kind="stable")
    return w[order], np.ascontiguousarray(v[:, order])


class ClassicalResult(NamedTuple):
    embedding: Embedding
    eigenvalues: np.ndarray
    clamped: bool  # some of the top-L eigenvalues were negative and set to zero


def classical_mds(delta, l: int, method: str = "lapack") -> ClassicalResult:
    """Torgerson scaling: top-L eigenpairs of the double-centered squared dissimilarities."""
    dv = _values(delta)
    n = dv.shape[0]
    if not 1 <= l <= n:
        raise ValueError(f"dimension must lie in [1, {n}], got {l}")
    w, v = symmetric_eig(double_center(dv), method=method)
    top = w[:l]
    clamped = bool(np.any(top < 0))
    if clamped:
        warnings.warn(f"{int(np.sum(top < 0))} of the top {l} eigenvalues are negative; "
                      "clamped to zero", RuntimeWarning, stacklevel=2)
    coords = v[:, :l] * np.sqrt(np.maximum(top, 0.0))
    return ClassicalResult(Embedding.from_coords(coords), w, clamped)


def _b_matrix(delta: np.ndarray, d: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(d > 0, delta / np.where(d > 0, d, 1.0), 0.0)
    b = -ratio
    np.fill_diagonal(b, 0.0)
    np.fill_diagonal(b, -b.sum(axis=1))
    return b


def guttman_step(x: Embedding, delta) -> Embedding:
    """One Guttman transform ``X' = B(X) X / N`` (unit weights)."""
    dv = _values(delta)
    n = x.n
    coords = _b_matrix(dv, x.distances) @ x.coords / n
    return Embedding.from_coords(coords)


def smacof_stress(x: Embedding, delta) -> float:
    """sum_{i<j} (delta_ij - d_ij)^2, half the raw double-sum stress."""
    return 0.5 * raw_stress(_values(delta), x.distances)


class SmacofResult(NamedTuple):
    embedding: Embedding
    trace: list
    converged: bool


def run_smacof(delta, l: int, tol: float = 1e-6, max_iter: int = 300, seed=0,
               init=None) -> SmacofResult:
    """Iterate Guttman transforms from a uniform [0, 1) start.

    Stops when the relative decrease of the stress drops to ``tol`` or
    below. Trace records hold the raw (double-sum) stress so they compare
    directly with coordinate-search traces; ``evals`` counts iterations.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    dv = _values(delta)
    n = dv.shape[0]
    if init is None:
        init = make_rng(seed).random((n, l))
    x = Embedding.from_coords(init)
    start = time.perf_counter()
    prev = raw_stress(dv, x.distances)
    trace = [TraceRecord(0, prev, 0.0, 0, 0.0)]
    converged = False
    for it in range(1, max_iter + 1):
        x = guttman_step(x, dv)
        cur = raw_stress(dv, x.distances)
        trace.append(TraceRecord(it, cur, 0.0, it, (time.perf_counter() - start) * 1e3))
        # an exact fit cannot improve; the relative test alone never fires on it
        if cur == 0.0 or prev - cur <= tol * prev:
            converged = True
            break
        prev = cur
    return SmacofResult(x, trace, converged)

