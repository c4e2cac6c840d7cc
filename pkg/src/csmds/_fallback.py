"""Pure NumPy implementations of the hot kernels.

Signatures and semantics mirror ``_kernels.pyx`` exactly; ``_backend``
picks whichever is available.
"""

import heapq

import numpy as np


def draw_order(l):
    """Column indices and (dim, sign) pairs in draw order: +0, -0, +1, -1, ..."""
    dims = np.repeat(np.arange(l), 2)
    signs = np.tile(np.array([1.0, -1.0]), l)
    cols = np.where(signs > 0, dims, dims + l)
    return cols, dims, signs


def csmds_epoch(T, X, D, P, U, r, stress, p_a, p_th, moves, point_stress):
    """One pass of greedy coordinate moves over every point, in place.

    ``U[i]`` holds the 2L pre-drawn uniforms for point ``i`` in draw order;
    candidate ``c`` is evaluated when ``U[i, c] < P[i, col(c)]``. Rewrites
    ``X``, ``D`` and (when ``p_a > 0``) ``P``; fills ``moves`` with the
    accepted column (-1 for the zero step) and ``point_stress`` with the
    stress after each point. Returns ``(stress, evals)``.
    """
    n, l = X.shape
    cols, dims, signs = draw_order(l)
    rr = r * r
    evals = 0
    for i in range(n):
        mask = U[i] < P[i, cols]
        m = int(mask.sum())
        evals += m
        best = -1
        if m:
            ds = dims[mask]
            step = (2.0 * signs[mask]) * r
            d = D[i]
            ti = T[i]
            diff = X[i, ds][None, :] - X[:, ds]
            d2n = (d * d)[:, None] + step[None, :] * diff + rr
            np.maximum(d2n, 0.0, out=d2n)
            dn = np.sqrt(d2n)
            terms = (dn - d[:, None]) * (dn + d[:, None] - 2.0 * ti[:, None])
            terms[i] = 0.0
            deltas = terms.sum(axis=0)
            k = int(np.argmin(deltas))
            if deltas[k] < 0.0:
                s = int(ds[k])
                sg = 1.0 if step[k] > 0 else -1.0
                xi = X[i].copy()
                xi[s] += sg * r
                dx = X - xi
                row = np.sqrt(np.einsum("jk,jk->j", dx, dx))
                row[i] = 0.0
                t = (row - d) * (row + d - 2.0 * ti)
                t[i] = 0.0
                new_stress = stress + 2.0 * float(t.sum())
                if new_stress < stress:
                    X[i] = xi
                    D[i, :] = row
                    D[:, i] = row
                    stress = new_stress
                    best = s if sg > 0 else s + l
        moves[i] = best
        point_stress[i] = stress
        if best >= 0 and p_a > 0.0:
            row_p = P[i]
            row_p[best] = min(row_p[best] + 2.0 * p_a, 1.0)
            np.maximum(row_p - p_a, p_th, out=row_p)
    return stress, evals


def dijkstra_all_pairs(indptr, indices, weights, n):
    """All-pairs shortest paths on a CSR graph with positive weights."""
    out = np.full((n, n), np.inf)
    indptr = indptr.tolist()
    indices = indices.tolist()
    weights = weights.tolist()
    for src in range(n):
        dist = [np.inf] * n
        dist[src] = 0.0
        done = [False] * n
        heap = [(0.0, src)]
        while heap:
            du, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                nd = du + weights[e]
                if nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        out[src] = dist
    return out
