# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels. Semantics match ``_fallback.py`` one for one."""

import numpy as np
from libc.math cimport sqrt, INFINITY
from libc.stdlib cimport malloc, free


def csmds_epoch(const double[:, ::1] T, double[:, ::1] X, double[:, ::1] D,
                double[:, ::1] P, const double[:, ::1] U, double r, double stress,
                double p_a, double p_th, long long[::1] moves, double[::1] point_stress):
    cdef Py_ssize_t n = X.shape[0], l = X.shape[1]
    cdef Py_ssize_t i, j, k, c, s, col, best, best_s
    cdef double rr = r * r, sg, step, d, dn, d2n, diff, delta, best_delta, best_sg
    cdef double new_stress, acc
    cdef long long evals = 0
    cdef double *row = <double *> malloc(n * sizeof(double))
    cdef double *xi = <double *> malloc(l * sizeof(double))
    if row == NULL or xi == NULL:
        free(row)
        free(xi)
        raise MemoryError()
    try:
        for i in range(n):
            best = -1
            best_s = -1
            best_sg = 0.0
            best_delta = 0.0
            for c in range(2 * l):
                s = c // 2
                if c % 2 == 0:
                    sg = 1.0
                    col = s
                else:
                    sg = -1.0
                    col = s + l
                if not U[i, c] < P[i, col]:
                    continue
                evals += 1
                step = (2.0 * sg) * r
                delta = 0.0
                for j in range(n):
                    if j == i:
                        continue
                    d = D[i, j]
                    diff = X[i, s] - X[j, s]
                    d2n = d * d + step * diff + rr
                    if d2n < 0.0:
                        d2n = 0.0
                    dn = sqrt(d2n)
                    delta += (dn - d) * (dn + d - 2.0 * T[i, j])
                if delta < best_delta:
                    best_delta = delta
                    best_s = s
                    best_sg = sg
            if best_s >= 0:
                for k in range(l):
                    xi[k] = X[i, k]
                xi[best_s] += best_sg * r
                delta = 0.0
                for j in range(n):
                    if j == i:
                        row[j] = 0.0
                        continue
                    acc = 0.0
                    for k in range(l):
                        diff = X[j, k] - xi[k]
                        acc += diff * diff
                    dn = sqrt(acc)
                    row[j] = dn
                    d = D[i, j]
                    delta += (dn - d) * (dn + d - 2.0 * T[i, j])
                new_stress = stress + 2.0 * delta
                if new_stress < stress:
                    for k in range(l):
                        X[i, k] = xi[k]
                    for j in range(n):
                        D[i, j] = row[j]
                        D[j, i] = row[j]
                    stress = new_stress
                    best = best_s if best_sg > 0 else best_s + l
            moves[i] = best
            point_stress[i] = stress
            if best >= 0 and p_a > 0.0:
                acc = P[i, best] + 2.0 * p_a
                P[i, best] = acc if acc < 1.0 else 1.0
                for c in range(2 * l):
                    acc = P[i, c] - p_a
                    P[i, c] = acc if acc > p_th else p_th
    finally:
        free(row)
        free(xi)
    return stress, evals


cdef inline void _heap_push(double *keys, Py_ssize_t *vals, Py_ssize_t *size,
                            double key, Py_ssize_t val) noexcept nogil:
    cdef Py_ssize_t pos = size[0], parent
    size[0] += 1
    while pos > 0:
        parent = (pos - 1) >> 1
        if keys[parent] < key or (keys[parent] == key and vals[parent] <= val):
            break
        keys[pos] = keys[parent]
        vals[pos] = vals[parent]
        pos = parent
    keys[pos] = key
    vals[pos] = val


cdef inline void _heap_pop(double *keys, Py_ssize_t *vals, Py_ssize_t *size,
                           double *key, Py_ssize_t *val) noexcept nogil:
    cdef Py_ssize_t pos = 0, child, last
    cdef double lk
    cdef Py_ssize_t lv
    key[0] = keys[0]
    val[0] = vals[0]
    size[0] -= 1
    last = size[0]
    if last == 0:
        return
    lk = keys[last]
    lv = vals[last]
    while True:
        child = 2 * pos + 1
        if child >= last:
            break
        if child + 1 < last and (keys[child + 1] < keys[child] or
                                 (keys[child + 1] == keys[child] and vals[child + 1] < vals[child])):
            child += 1
        if lk < keys[child] or (lk == keys[child] and lv <= vals[child]):
            break
        keys[pos] = keys[child]
        vals[pos] = vals[child]
        pos = child
    keys[pos] = lk
    vals[pos] = lv


def dijkstra_all_pairs(const long long[::1] indptr, const long long[::1] indices,
                       const double[::1] weights, Py_ssize_t n):
    out = np.full((n, n), np.inf)
    cdef double[:, ::1] dist = out
    cdef Py_ssize_t m = indices.shape[0]
    cdef Py_ssize_t cap = m + n + 1
    cdef double *keys = <double *> malloc(cap * sizeof(double))
    cdef Py_ssize_t *vals = <Py_ssize_t *> malloc(cap * sizeof(Py_ssize_t))
    cdef char *done = <char *> malloc(n * sizeof(char))
    cdef Py_ssize_t src, u, v, e, size
    cdef double du, nd
    if keys == NULL or vals == NULL or done == NULL:
        free(keys)
        free(vals)
        free(done)
        raise MemoryError()
    try:
        with nogil:
            for src in range(n):
                for u in range(n):
                    done[u] = 0
                size = 0
                dist[src, src] = 0.0
                _heap_push(keys, vals, &size, 0.0, src)
                while size > 0:
                    _heap_pop(keys, vals, &size, &du, &u)
                    if done[u]:
                        continue
                    done[u] = 1
                    for e in range(indptr[u], indptr[u + 1]):
                        v = indices[e]
                        nd = du + weights[e]
                        if nd < dist[src, v]:
                            dist[src, v] = nd
                            _heap_push(keys, vals, &size, nd, v)
    finally:
        free(keys)
        free(vals)
        free(done)
    return out
