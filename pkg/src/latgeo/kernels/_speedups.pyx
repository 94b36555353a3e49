# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: Gram-matrix LLL reduction and Fincke-Pohst enumeration.

Mirror of ``pure.py``; both backends must return identical arrays on
identical inputs.  See that module for the algorithmic commentary.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport ceil, floor, sqrt

from latgeo.errors import (
    CapacityError,
    NotPositiveDefiniteError,
    ReductionError,
)

cnp.import_array()

BACKEND_NAME = "compiled"

cdef long _MAX_LLL_ROUNDS = 100000
cdef double _COORD_SLACK = 1e-9


cdef long long _round_half_even(double x):
    # match Python's round(): banker's rounding on the .5 boundary
    cdef double f = floor(x)
    cdef double diff = x - f
    if diff > 0.5:
        return <long long> f + 1
    if diff < 0.5:
        return <long long> f
    if (<long long> f) % 2 == 0:
        return <long long> f
    return <long long> f + 1


cdef int _gso_from_gram(double[:, ::1] g, double[:, ::1] mu,
                        double[::1] b, double[:, ::1] r) except -1:
    cdef Py_ssize_t n = g.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double s
    for i in range(n):
        for j in range(i + 1):
            s = g[i, j]
            for k in range(j):
                s -= mu[j, k] * r[i, k]
            r[i, j] = s
            if j < i:
                mu[i, j] = s / b[j]
        b[i] = r[i, i]
        if b[i] <= 0.0:
            raise NotPositiveDefiniteError("Gram matrix is not positive definite")
    return 0


def lll_reduce_gram(gram, double delta=0.99):
    """LLL-reduce a positive definite Gram matrix.

    Returns ``(reduced, u)`` with ``reduced = u.T @ gram @ u`` for an integer
    matrix ``u`` of determinant +-1.
    """
    g_arr = np.array(gram, dtype=np.float64, order="C")
    cdef Py_ssize_t n = g_arr.shape[0]
    u_arr = np.eye(n, dtype=np.int64)
    if n == 1:
        return g_arr, u_arr
    mu_arr = np.zeros((n, n))
    b_arr = np.zeros(n)
    r_arr = np.zeros((n, n))
    cdef double[:, ::1] g = g_arr
    cdef cnp.int64_t[:, ::1] u = u_arr
    cdef double[:, ::1] mu = mu_arr
    cdef double[::1] b = b_arr
    cdef double[:, ::1] r = r_arr
    cdef Py_ssize_t k = 1, j, col
    cdef long rounds = 0
    cdef long long m, itmp
    cdef double tmp
    while k < n:
        rounds += 1
        if rounds > _MAX_LLL_ROUNDS:
            raise ReductionError("LLL failed to terminate")
        _gso_from_gram(g, mu, b, r)
        for j in range(k - 1, -1, -1):
            m = _round_half_even(mu[k, j])
            if m != 0:
                for col in range(n):
                    g[k, col] -= m * g[j, col]
                for col in range(n):
                    g[col, k] -= m * g[col, j]
                for col in range(n):
                    u[col, k] -= m * u[col, j]
                _gso_from_gram(g, mu, b, r)
        if b[k] >= (delta - mu[k, k - 1] * mu[k, k - 1]) * b[k - 1]:
            k += 1
        else:
            for col in range(n):
                tmp = g[k - 1, col]
                g[k - 1, col] = g[k, col]
                g[k, col] = tmp
            for col in range(n):
                tmp = g[col, k - 1]
                g[col, k - 1] = g[col, k]
                g[col, k] = tmp
            for col in range(n):
                itmp = u[col, k - 1]
                u[col, k - 1] = u[col, k]
                u[col, k] = itmp
            k = k - 1 if k > 1 else 1
    return g_arr, u_arr


cdef void _enter_level(Py_ssize_t i, Py_ssize_t n, double[:, ::1] c,
                       double[::1] d, cnp.int64_t[::1] x, cnp.int64_t[::1] za,
                       double[::1] budget, double[::1] cen,
                       cnp.int64_t[::1] cur, cnp.int64_t[::1] hi):
    cdef double ce = 0.0
    cdef Py_ssize_t j
    for j in range(i + 1, n):
        ce += c[i, j] * x[j]
    cen[i] = ce
    cdef double z = sqrt((budget[i] if budget[i] > 0.0 else 0.0) / d[i])
    cdef long long lo = <long long> ceil(-z - ce - _COORD_SLACK)
    cdef long long high = <long long> floor(z - ce + _COORD_SLACK)
    if za[i] == 1 and lo < 0:
        lo = 0
    cur[i] = lo
    hi[i] = high


def fincke_pohst(gram, double bound, long long cap):
    """Nonzero integer vectors v, up to sign, with v^T gram v <= bound.

    Same contract as the pure backend: slack-inflated interval bounds, caller
    post-filters; one vector per +-pair (highest nonzero coordinate positive);
    CapacityError past ``cap`` vectors.
    """
    a_arr = np.array(gram, dtype=np.float64, order="C")
    cdef Py_ssize_t n = a_arr.shape[0]
    c_arr = np.zeros((n, n))
    d_arr = np.zeros(n)
    cdef double[:, ::1] a = a_arr
    cdef double[:, ::1] c = c_arr
    cdef double[::1] d = d_arr
    cdef Py_ssize_t i, j, k2
    cdef double piv
    for i in range(n):
        d[i] = a[i, i]
        if d[i] <= 0.0:
            raise NotPositiveDefiniteError("Gram matrix is not positive definite")
        piv = d[i]
        for j in range(i + 1, n):
            c[i, j] = a[i, j] / piv
        for j in range(i + 1, n):
            for k2 in range(j, n):
                a[j, k2] = a[j, k2] - a[i, j] * a[i, k2] / piv
                a[k2, j] = a[j, k2]

    cdef double budget_tol = -(bound if bound > 0 else -bound) * 1e-12 - 1e-300

    x_arr = np.zeros(n, dtype=np.int64)
    cur_arr = np.zeros(n, dtype=np.int64)
    hi_arr = np.zeros(n, dtype=np.int64)
    za_arr = np.zeros(n, dtype=np.int64)
    budget_arr = np.zeros(n)
    cen_arr = np.zeros(n)
    cdef cnp.int64_t[::1] x = x_arr
    cdef cnp.int64_t[::1] cur = cur_arr
    cdef cnp.int64_t[::1] hi = hi_arr
    cdef cnp.int64_t[::1] za = za_arr  # 1 when all coordinates above are zero
    cdef double[::1] budget = budget_arr
    cdef double[::1] cen = cen_arr

    cdef long long capacity = 1024
    out_arr = np.zeros((capacity, n), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] out = out_arr
    cdef long long count = 0

    cdef Py_ssize_t level = n - 1
    cdef double r, ce
    cdef long long xi

    budget[level] = bound
    za[level] = 1
    _enter_level(level, n, c, d, x, za, budget, cen, cur, hi)

    while True:
        if cur[level] > hi[level]:
            level += 1
            if level >= n:
                break
            cur[level] += 1
            continue
        xi = cur[level]
        x[level] = xi
        ce = xi + cen[level]
        r = budget[level] - d[level] * ce * ce
        if r < budget_tol:
            cur[level] += 1
            continue
        if level == 0:
            if not (za[0] == 1 and xi == 0):
                if count == capacity:
                    capacity *= 2
                    out_arr = np.concatenate(
                        [out_arr, np.zeros((capacity - count, n), dtype=np.int64)]
                    )
                    out = out_arr
                for j in range(n):
                    out[count, j] = x[j]
                count += 1
                if count > cap:
                    raise CapacityError(
                        "enumeration exceeded cap of %d vectors" % cap
                    )
            cur[level] += 1
        else:
            level -= 1
            budget[level] = r if r > 0.0 else 0.0
            za[level] = 1 if (za[level + 1] == 1 and xi == 0) else 0
            _enter_level(level, n, c, d, x, za, budget, cen, cur, hi)

    return out_arr[:count].copy()
