# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled subset-enumeration kernels.

Mirrors ``_pykernels`` exactly: same scan orders, same order of floating
point operations, so both backends return identical results.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, INFINITY

cnp.import_array()


def subset_sums(values):
    cdef const double[::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t n = v.shape[0]
    out_arr = np.zeros(1 << n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, m, size = 1
    cdef double x
    for i in range(n):
        x = v[i]
        for m in range(size):
            out[size + m] = out[m] + x
        size <<= 1
    return out_arr


def submask_index(elements):
    cdef const cnp.int64_t[::1] el = np.ascontiguousarray(elements, dtype=np.int64)
    cdef Py_ssize_t n = el.shape[0]
    out_arr = np.zeros(1 << n, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    cdef Py_ssize_t i, m, size = 1
    cdef cnp.int64_t bit
    for i in range(n):
        bit = (<cnp.int64_t>1) << el[i]
        for m in range(size):
            out[size + m] = out[m] | bit
        size <<= 1
    return out_arr


def ratio_extremize(num, den, bint maximize, double rtol):
    cdef const double[::1] a = np.ascontiguousarray(num, dtype=np.float64)
    cdef const double[::1] b = np.ascontiguousarray(den, dtype=np.float64)
    cdef Py_ssize_t size = a.shape[0], m, k = 0
    if size < 2:
        raise ValueError("need at least one nonempty mask")
    ratio_arr = np.empty(size, dtype=np.float64)
    cdef double[::1] r = ratio_arr
    cdef const double* ap = &a[0]
    cdef const double* bp = &b[0]
    cdef double* rp = &r[0]
    # sign flip turns max into min; four accumulators break the dependency chain
    cdef double sgn = -1.0 if maximize else 1.0
    cdef double q, b0, b1, b2, b3
    for m in range(1, size):
        rp[m] = ap[m] / bp[m]
    b0 = b1 = b2 = b3 = sgn * rp[1]
    m = 2
    while m + 3 < size:
        q = sgn * rp[m]
        b0 = q if q < b0 else b0
        q = sgn * rp[m + 1]
        b1 = q if q < b1 else b1
        q = sgn * rp[m + 2]
        b2 = q if q < b2 else b2
        q = sgn * rp[m + 3]
        b3 = q if q < b3 else b3
        m += 4
    while m < size:
        q = sgn * rp[m]
        b0 = q if q < b0 else b0
        m += 1
    b0 = b1 if b1 < b0 else b0
    b2 = b3 if b3 < b2 else b2
    cdef double best = sgn * (b2 if b2 < b0 else b0)
    cdef double thr = rtol * (fabs(best) if fabs(best) > 1.0 else 1.0)
    fam_arr = np.empty(size - 1, dtype=np.int64)
    cdef cnp.int64_t[::1] fam = fam_arr
    for m in range(1, size):
        if fabs(rp[m] - best) <= thr:
            fam[k] = m
            k += 1
    return float(best), fam_arr[:k].copy()


def pairwise_violation(table, int n, bint submodular, double tol):
    cdef const double[::1] t = np.ascontiguousarray(table, dtype=np.float64)
    cdef Py_ssize_t size = 1 << n, s
    cdef int i, j
    cdef Py_ssize_t bi, bj
    cdef double lhs, rhs
    for i in range(n):
        bi = (<Py_ssize_t>1) << i
        for j in range(i + 1, n):
            bj = (<Py_ssize_t>1) << j
            for s in range(size):
                if s & (bi | bj):
                    continue
                lhs = t[s | bi] + t[s | bj]
                rhs = t[s | bi | bj] + t[s]
                if submodular:
                    if lhs < rhs - tol:
                        return int(s), i, j
                elif lhs > rhs + tol:
                    return int(s), i, j
    return None


def monotone_violation(table, int n, double tol):
    cdef const double[::1] t = np.ascontiguousarray(table, dtype=np.float64)
    cdef Py_ssize_t size = 1 << n, s, bi
    cdef int i
    for i in range(n):
        bi = (<Py_ssize_t>1) << i
        for s in range(size):
            if s & bi:
                continue
            if t[s | bi] < t[s] - tol:
                return int(s), i
    return None


def zeta_violation(table, int n, zp, bint increasing, double tol):
    cdef const double[::1] t = np.ascontiguousarray(table, dtype=np.float64)
    cdef const double[::1] z = np.ascontiguousarray(zp, dtype=np.float64)
    cdef Py_ssize_t size = 1 << n, m, lo, bi, bj, bb
    cdef int i, j, b
    cdef double inf = -INFINITY if increasing else INFINITY
    cdef double cand, lhs, rhs
    best_arr = np.empty(size, dtype=np.float64)
    arg_arr = np.empty(size, dtype=np.int64)
    cdef double[::1] best = best_arr
    cdef cnp.int64_t[::1] arg = arg_arr
    for i in range(n):
        bi = (<Py_ssize_t>1) << i
        for m in range(size):
            arg[m] = m
            if m & bi:
                best[m] = inf
            else:
                best[m] = t[m | bi] - t[m]
        for b in range(n):
            bb = (<Py_ssize_t>1) << b
            for m in range(size):
                if not (m & bb):
                    continue
                lo = m ^ bb
                cand = best[lo]
                if increasing:
                    if cand > best[m]:
                        best[m] = cand
                        arg[m] = arg[lo]
                elif cand < best[m]:
                    best[m] = cand
                    arg[m] = arg[lo]
        for j in range(n):
            if j == i:
                continue
            bj = (<Py_ssize_t>1) << j
            for m in range(size):
                if not (m & bi) or (m & bj):
                    continue
                lhs = z[j] * best[m]
                rhs = z[i] * (t[m | bj] - t[m])
                if increasing:
                    if lhs > rhs + tol:
                        return int(arg[m]), i, int(m), j
                elif lhs < rhs - tol:
                    return int(arg[m]), i, int(m), j
    return None
