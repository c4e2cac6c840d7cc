"""Independent reference computations used by the tests.

Nothing here calls into the incremental or compiled paths of the package;
every routine is the slow, obvious version.
"""

import math

import numpy as np


def distance_matrix_loops(coords):
    coords = np.asarray(coords, dtype=float)
    n = len(coords)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            out[i, j] = math.sqrt(sum((a - b) ** 2 for a, b in zip(coords[i], coords[j])))
    return out


def stress_loops(t, d):
    t, d = np.asarray(t, dtype=float), np.asarray(d, dtype=float)
    total = 0.0
    for i in range(len(t)):
        for j in range(len(t)):
            total += (t[i, j] - d[i, j]) ** 2
    return total


def brute_force_step(t, coords, i, r):
    """Zero step plus all 2L signed steps for point ``i``, each by full recomputation.

    Returns ``(column, stress)`` with column -1 for the zero step; candidates
    are visited as +0, -0, +1, -1, ... and only a strictly lower stress
    replaces the incumbent.
    """
    l = coords.shape[1]
    best_col, best = -1, stress_full(t, coords)
    for s in range(l):
        for sign in (1, -1):
            trial = coords.copy()
            trial[i, s] += sign * r
            e = stress_full(t, trial)
            if e < best:
                best_col, best = (s if sign > 0 else s + l), e
    return best_col, best


def stress_full(t, coords):
    diff = coords[:, None, :] - coords[None, :, :]
    d = np.sqrt((diff ** 2).sum(axis=2))
    return float(((np.asarray(t) - d) ** 2).sum())


def floyd_warshall(n, edges):
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for u, v, w in edges:
        dist[u, v] = min(dist[u, v], w)
        dist[v, u] = min(dist[v, u], w)
    for k in range(n):
        dist = np.minimum(dist, dist[:, k:k + 1] + dist[k:k + 1, :])
    return dist


def random_connected_graph(rng, n, extra_edges):
    """Random spanning tree plus extra random edges, positive weights."""
    edges = {}
    order = rng.permutation(n)
    for a in range(1, n):
        u, v = int(order[a]), int(order[rng.integers(0, a)])
        edges[(min(u, v), max(u, v))] = float(rng.uniform(0.1, 5.0))
    while len(edges) < n - 1 + extra_edges:
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        if u != v:
            edges.setdefault((min(u, v), max(u, v)), float(rng.uniform(0.1, 5.0)))
    return [(u, v, w) for (u, v), w in edges.items()]


def symmetric_eigenvalues_2x2(a, b, c):
    """Eigenvalues of [[a, b], [b, c]] from the characteristic polynomial."""
    mean = 0.5 * (a + c)
    rad = math.sqrt(0.25 * (a - c) ** 2 + b * b)
    return mean + rad, mean - rad
