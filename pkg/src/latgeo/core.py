"""Lattice representation, short-vector enumeration, systole, and strata.

A marked lattice is held either as a basis (columns are the lattice basis
vectors) or coordinate-free as its Gram matrix.  The systole machinery is
float-based, but minimal vectors keep exact integer coordinates and all rank
computations are done over the rationals, so stratum membership never depends
on a floating rank threshold.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from latgeo import kernels
from latgeo.errors import NotPositiveDefiniteError, SingularMatrixError

# Relative band for "attains the systole": float enumeration needs a tie
# tolerance even though the underlying geometry treats equality exactly.
EPS_SYS = 1e-9
# Hard cap on enumerated vectors; hitting it signals a degenerate radius.
ENUM_CAP = 1_000_000

LLL_DELTA = 0.99

_SYM_TOL = 1e-12


class BasisMatrix:
    """Square real matrix whose columns are the basis vectors of a lattice."""

    def __init__(self, entries):
        m = np.array(entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("basis must be a square matrix")
        if not np.all(np.isfinite(m)):
            raise ValueError("basis entries must be finite")
        if np.linalg.det(m) == 0.0:
            raise SingularMatrixError("basis columns must be linearly independent")
        self.entries = m
        self.n = m.shape[0]

    def det(self):
        return float(np.linalg.det(self.entries))

    def __repr__(self):
        return "BasisMatrix(%r)" % (self.entries.tolist(),)


class GramMatrix:
    """Symmetric positive definite matrix of pairwise inner products.

    Construction symmetrizes the input (rejecting asymmetry beyond 1e-12
    relative) and verifies positive definiteness via Cholesky.
    """

    def __init__(self, entries):
        m = np.array(entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("gram must be a square matrix")
        if not np.all(np.isfinite(m)):
            raise ValueError("gram entries must be finite")
        scale = max(1.0, float(np.max(np.abs(m))))
        if np.max(np.abs(m - m.T)) > _SYM_TOL * scale:
            raise ValueError("gram matrix is not symmetric")
        m = (m + m.T) / 2.0
        try:
            np.linalg.cholesky(m)
        except np.linalg.LinAlgError:
            raise NotPositiveDefiniteError("gram matrix is not positive definite")
        self.entries = m
        self.n = m.shape[0]

    def det(self):
        return float(np.linalg.det(self.entries))

    def __repr__(self):
        return "GramMatrix(%r)" % (self.entries.tolist(),)


@dataclass(frozen=True)
class MinimalVectorSet:
    """Systole value together with every integer vector attaining it.

    Vectors are stored up to sign (first nonzero coordinate positive),
    deduplicated, and sorted lexicographically.
    """

    systole_sq: float
    vectors: np.ndarray

    def __len__(self):
        return self.vectors.shape[0]


def as_basis(b):
    if isinstance(b, BasisMatrix):
        return b
    return BasisMatrix(b)


def as_gram(q):
    if isinstance(q, GramMatrix):
        return q
    return GramMatrix(q)


def normalize_covolume(b):
    """Rescale a basis to covolume 1, preserving orientation.

    Raises SingularMatrixError when |det| is too small to normalize.
    """
    b = as_basis(b)
    d = abs(b.det())
    if d < 1e-300:
        raise SingularMatrixError("basis is singular or near-singular")
    return BasisMatrix(b.entries * d ** (-1.0 / b.n))


def gram_of(b):
    """Gram matrix B^T B of a basis."""
    b = as_basis(b)
    return GramMatrix(b.entries.T @ b.entries)


def lll_reduce(q, delta=LLL_DELTA):
    """LLL-reduce a Gram matrix; returns (reduced GramMatrix, unimodular U)."""
    q = as_gram(q)
    g, u = kernels.lll_reduce_gram(q.entries, delta)
    return GramMatrix(g), u


def sign_normalize(vectors):
    """Flip each integer vector so its first nonzero coordinate is positive."""
    v = np.array(vectors, dtype=np.int64)
    if v.size == 0:
        return v
    for row in v:
        for x in row:
            if x != 0:
                if x < 0:
                    row *= -1
                break
    return v


def _short_with_norms(q, radius_sq, cap):
    """Enumerate up-to-sign vectors with v^T q v <= radius_sq*(1+EPS_SYS).

    Returns (vectors, squared lengths), vectors sign-normalized and sorted
    lexicographically.  Reduction happens internally; output coordinates
    refer to q itself.
    """
    qm = q.entries
    reduced, u = kernels.lll_reduce_gram(qm, LLL_DELTA)
    bound = radius_sq * (1.0 + EPS_SYS)
    raw = kernels.fincke_pohst(reduced, bound, cap)
    if raw.shape[0] == 0:
        return raw, np.zeros(0)
    vecs = raw @ u.T  # map back from reduced coordinates
    vals = np.einsum("ij,jk,ik->i", vecs, qm, vecs)
    keep = vals <= bound
    vecs, vals = vecs[keep], vals[keep]
    vecs = sign_normalize(vecs)
    order = np.lexsort(vecs.T[::-1])
    return vecs[order], vals[order]


def enumerate_short_vectors(q, radius_sq, cap=ENUM_CAP):
    """All nonzero integer vectors, up to sign, with v^T Q v <= radius_sq.

    Complete: no vector within the radius is missed (Fincke-Pohst bounds after
    LLL preprocessing).  Raises CapacityError beyond ``cap`` vectors.
    """
    q = as_gram(q)
    if radius_sq <= 0:
        raise ValueError("radius_sq must be positive")
    vecs, _ = _short_with_norms(q, float(radius_sq), cap)
    return vecs


def systole_data(q, band=EPS_SYS, cap=ENUM_CAP):
    """Systole (squared) and all vectors attaining it within a relative band."""
    q = as_gram(q)
    reduced, _ = kernels.lll_reduce_gram(q.entries, LLL_DELTA)
    upper = float(np.min(np.diag(reduced)))  # achieved by a unit vector
    vecs, vals = _short_with_norms(q, upper, cap)
    systole_sq = float(np.min(vals))
    keep = vals <= systole_sq * (1.0 + band)
    return MinimalVectorSet(systole_sq, vecs[keep])


def _echelon_basis(vectors):
    """Indices of a Q-basis of the span, by exact elimination in input order."""
    basis_rows = []  # echelon rows as Fraction lists
    picked = []
    for idx, vec in enumerate(vectors):
        row = [Fraction(int(x)) for x in vec]
        for erow in basis_rows:
            pivot = next((j for j, x in enumerate(erow) if x != 0), None)
            if pivot is not None and row[pivot] != 0:
                factor = row[pivot] / erow[pivot]
                row = [a - factor * b for a, b in zip(row, erow)]
        if any(x != 0 for x in row):
            basis_rows.append(row)
            picked.append(idx)
    return picked, basis_rows


def _in_span(echelon_rows, vec):
    """Exact membership of an integer vector in the span of echelon rows."""
    row = [Fraction(int(x)) for x in vec]
    for erow in echelon_rows:
        pivot = next((j for j, x in enumerate(erow) if x != 0), None)
        if pivot is not None and row[pivot] != 0:
            factor = row[pivot] / erow[pivot]
            row = [a - factor * b for a, b in zip(row, erow)]
    return not any(x != 0 for x in row)


def span_rank(m):
    """Rank over Q of a set of integer vectors (exact integer elimination)."""
    vectors = m.vectors if isinstance(m, MinimalVectorSet) else np.asarray(m)
    if vectors.shape[0] == 0:
        raise ValueError("span_rank requires a nonempty vector set")
    picked, _ = _echelon_basis(vectors)
    return len(picked)


def stratum_index(q, band=EPS_SYS):
    """Dimension of the span of the minimal vectors; n means well-rounded."""
    return span_rank(systole_data(as_gram(q), band=band))


def is_well_rounded(q, band=EPS_SYS):
    q = as_gram(q)
    return stratum_index(q, band=band) == q.n


def length_spectrum(q, count, cap=ENUM_CAP):
    """First ``count`` distinct squared lengths with multiplicities (up to sign)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    q = as_gram(q)
    reduced, _ = kernels.lll_reduce_gram(q.entries, LLL_DELTA)
    radius = float(np.min(np.diag(reduced)))
    while True:
        _, vals = _short_with_norms(q, radius, cap)
        groups = _group_lengths(vals)
        if len(groups) >= count:
            return groups[:count]
        radius *= 2.0


def _group_lengths(vals):
    groups = []
    for v in np.sort(vals):
        if groups and v <= groups[-1][0] * (1.0 + EPS_SYS):
            groups[-1][1] += 1
        else:
            groups.append([float(v), 1])
    return [(v, c) for v, c in groups]
