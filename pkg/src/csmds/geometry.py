"""Synthetic manifolds and k-NN graph geodesic distances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .stress import compute_distance_matrix
from .types import TargetMatrix, ValidationError, make_rng, validate_target


class DisconnectedGraphError(ValidationError):
    def __init__(self, n_components: int):
        self.n_components = n_components
        super().__init__(f"neighbor graph is disconnected ({n_components} components)")


@dataclass
class PointCloud:
    points: np.ndarray
    aux: np.ndarray  # manifold parameter, e.g. the roll angle


@dataclass
class NeighborGraph:
    """Undirected weighted graph in CSR form (each edge stored both ways)."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray

    def neighbors(self, u: int):
        lo, hi = self.indptr[u], self.indptr[u + 1]
        return list(zip(self.indices[lo:hi].tolist(), self.weights[lo:hi].tolist()))

    def edges(self):
        """Unique undirected edges as (u, v, w) with u < v."""
        for u in range(self.n):
            for v, w in self.neighbors(u):
                if u < v:
                    yield u, v, w

    def degree(self) -> np.ndarray:
        return np.diff(self.indptr)


def generate_swissroll(n: int, noise: float = 0.0, seed=0) -> PointCloud:
    """Sample ``n`` points from the standard 3-D Swiss roll.

    ``t = 1.5*pi*(1 + 2u)``, point ``(t cos t, 21 v, t sin t)`` with
    ``u, v ~ U[0, 1)``, plus isotropic Gaussian noise of std ``noise``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if noise < 0:
        raise ValueError(f"noise must be >= 0, got {noise}")
    rng = make_rng(seed)
    u = rng.random(n)
    v = rng.random(n)
    t = 1.5 * np.pi * (1.0 + 2.0 * u)
    pts = np.column_stack([t * np.cos(t), 21.0 * v, t * np.sin(t)])
    if noise > 0:
        pts = pts + noise * rng.standard_normal(pts.shape)
    return PointCloud(pts, t)


def knn_graph(cloud, k: int) -> NeighborGraph:
    """Connect every point to its ``k`` nearest neighbours; symmetrize by union.

    Equal distances are broken towards the lower index.
    """
    pts = cloud.points if isinstance(cloud, PointCloud) else np.asarray(cloud, dtype=np.float64)
    n = pts.shape[0]
    if not 1 <= k < n:
        raise ValueError(f"k must lie in [1, {n - 1}], got {k}")
    d = compute_distance_matrix(pts)
    np.fill_diagonal(d, np.inf)
    nearest = np.argsort(d, axis=1, kind="stable")[:, :k]
    adj = np.zeros((n, n), dtype=bool)
    adj[np.repeat(np.arange(n), k), nearest.ravel()] = True
    adj |= adj.T
    rows, cols = np.nonzero(adj)
    w = d[rows, cols]
    if np.any(w <= 0):
        i = int(np.flatnonzero(w <= 0)[0])
        raise ValidationError(f"duplicate points {rows[i]} and {cols[i]} give a zero-weight edge")
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
    return NeighborGraph(n, indptr, cols.astype(np.int64), w.astype(np.float64))


def graph_from_edges(n: int, edges) -> NeighborGraph:
    """Build a symmetric :class:`NeighborGraph` from ``(u, v, w)`` triples."""
    adj = [dict() for _ in range(n)]
    for u, v, w in edges:
        if u == v:
            continue
        if not w > 0:
            raise ValidationError(f"edge ({u},{v}) has non-positive weight {w}")
        w = min(float(w), adj[u].get(v, np.inf))
        adj[u][v] = w
        adj[v][u] = w
    indptr = np.zeros(n + 1, dtype=np.int64)
    indices, weights = [], []
    for u in range(n):
        for v in sorted(adj[u]):
            indices.append(v)
            weights.append(adj[u][v])
        indptr[u + 1] = len(indices)
    return NeighborGraph(n, indptr, np.array(indices, dtype=np.int64),
                         np.array(weights, dtype=np.float64))


def connected_components(g: NeighborGraph) -> int:
    label = -np.ones(g.n, dtype=np.int64)
    count = 0
    for root in range(g.n):
        if label[root] >= 0:
            continue
        label[root] = count
        stack = [root]
        while stack:
            u = stack.pop()
            for v in g.indices[g.indptr[u]:g.indptr[u + 1]]:
                if label[v] < 0:
                    label[v] = count
                    stack.append(v)
        count += 1
    return count


def _bellman_ford_all_pairs(g: NeighborGraph) -> np.ndarray:
    n = g.n
    src = np.repeat(np.arange(n), np.diff(g.indptr))
    dst, w = g.indices, g.weights
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for _ in range(max(n - 1, 1)):
        cand = dist[:, src] + w
        new = dist.copy()
        # per column minimum over incoming edges; columns relax independently
        np.minimum.at(new.T, dst, cand.T)
        if np.array_equal(new, dist):
            break
        dist = new
    return dist


def shortest_paths(g: NeighborGraph, method: str = "dijkstra") -> np.ndarray:
    """Raw all-pairs shortest-path lengths (no symmetrization)."""
    if method == "dijkstra":
        return _backend.dijkstra_all_pairs(g.indptr, g.indices, g.weights, g.n)
    if method == "bellman-ford":
        return _bellman_ford_all_pairs(g)
    raise ValueError(f"unknown method {method!r}")


def geodesic_distances(g: NeighborGraph, method: str = "dijkstra") -> TargetMatrix:
    """Graph geodesic distances as a :class:`TargetMatrix`.

    Raises :class:`DisconnectedGraphError` when some pair is unreachable.
    """
    comps = connected_components(g)
    if comps > 1:
        raise DisconnectedGraphError(comps)
    return validate_target(shortest_paths(g, method))
