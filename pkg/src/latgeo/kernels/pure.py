"""Pure-Python kernels: Gram-matrix LLL reduction and Fincke-Pohst enumeration.

The compiled extension ``_speedups`` implements the same two entry points;
``latgeo.kernels`` selects whichever is available at import time.  Both
backends must return identical arrays on identical inputs (tested in
tests/test_kernels.py), so keep the algorithms in lockstep when editing.
"""

import math

import numpy as np

from latgeo.errors import (
    CapacityError,
    NotPositiveDefiniteError,
    ReductionError,
)

BACKEND_NAME = "pure"

_MAX_LLL_ROUNDS = 100_000
# Interval slack for the enumeration bounds.  Spurious boundary candidates are
# removed by the caller's exact post-filter; the slack only guards against a
# true vector being lost to rounding in the partial sums.
_COORD_SLACK = 1e-9


def _gso_from_gram(g):
    """Gram-Schmidt coefficients mu and squared star norms from a Gram matrix."""
    n = g.shape[0]
    mu = np.zeros((n, n))
    b = np.zeros(n)
    r = np.zeros((n, n))
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
    return mu, b


def lll_reduce_gram(gram, delta=0.99):
    """LLL-reduce a positive definite Gram matrix.

    Returns ``(reduced, u)`` with ``reduced = u.T @ gram @ u`` for an integer
    matrix ``u`` of determinant +-1.  Operates on the Gram matrix directly, so
    no basis embedding is ever chosen.
    """
    g = np.array(gram, dtype=float)
    n = g.shape[0]
    u = np.eye(n, dtype=np.int64)
    if n == 1:
        return g, u
    k = 1
    rounds = 0
    while k < n:
        rounds += 1
        if rounds > _MAX_LLL_ROUNDS:
            raise ReductionError("LLL failed to terminate")
        mu, b = _gso_from_gram(g)
        for j in range(k - 1, -1, -1):
            m = round(mu[k, j])
            if m != 0:
                # basis op b_k <- b_k - m*b_j, applied to the Gram two-sidedly
                g[k, :] -= m * g[j, :]
                g[:, k] -= m * g[:, j]
                u[:, k] -= m * u[:, j]
                mu, b = _gso_from_gram(g)
        if b[k] >= (delta - mu[k, k - 1] ** 2) * b[k - 1]:
            k += 1
        else:
            g[[k - 1, k], :] = g[[k, k - 1], :]
            g[:, [k - 1, k]] = g[:, [k, k - 1]]
            u[:, [k - 1, k]] = u[:, [k, k - 1]]
            k = max(k - 1, 1)
    return g, u


def _quadratic_completion(g):
    """Rewrite the form as sum_i d[i] * (x_i + sum_{j>i} c[i,j] x_j)^2."""
    n = g.shape[0]
    a = np.array(g, dtype=float)
    c = np.zeros((n, n))
    d = np.zeros(n)
    for i in range(n):
        d[i] = a[i, i]
        if d[i] <= 0.0:
            raise NotPositiveDefiniteError("Gram matrix is not positive definite")
        if i + 1 < n:
            c[i, i + 1 :] = a[i, i + 1 :] / d[i]
            a[i + 1 :, i + 1 :] -= np.outer(a[i, i + 1 :], a[i, i + 1 :]) / d[i]
    return d, c


def fincke_pohst(gram, bound, cap):
    """Nonzero integer vectors v, up to sign, with v^T gram v <= bound.

    Completeness is exact (Fincke-Pohst interval bounds plus slack); a few
    boundary candidates slightly over ``bound`` may be returned, so callers
    must post-filter with the comparison they actually need.  One vector per
    +-pair is produced: the one whose highest-index nonzero coordinate is
    positive.  Raises CapacityError when more than ``cap`` vectors accumulate.
    """
    g = np.asarray(gram, dtype=float)
    n = g.shape[0]
    d, c = _quadratic_completion(g)
    budget_tol = -abs(bound) * 1e-12 - 1e-300
    out = []
    x = np.zeros(n, dtype=np.int64)

    def descend(i, budget, zero_above):
        cen = float(c[i, i + 1 :] @ x[i + 1 :]) if i + 1 < n else 0.0
        z = math.sqrt(max(budget, 0.0) / d[i])
        lo = math.ceil(-z - cen - _COORD_SLACK)
        hi = math.floor(z - cen + _COORD_SLACK)
        if zero_above and lo < 0:
            lo = 0
        for xi in range(lo, hi + 1):
            r = budget - d[i] * (xi + cen) ** 2
            if r < budget_tol:
                continue
            x[i] = xi
            if i == 0:
                if zero_above and xi == 0:
                    continue
                out.append(x.copy())
                if len(out) > cap:
                    raise CapacityError(
                        "enumeration exceeded cap of %d vectors" % cap
                    )
            else:
                descend(i - 1, max(r, 0.0), zero_above and xi == 0)
        x[i] = 0

    descend(n - 1, float(bound), True)
    if not out:
        return np.zeros((0, n), dtype=np.int64)
    return np.array(out, dtype=np.int64)
