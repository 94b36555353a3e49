"""Symplectic structure, Siegel points as symplectic bases, and the plane dictionary.

Points of the hyperbolic plane are identified with covolume-1 rank-2 lattices
(generated by 1 and tau); products of g such planes embed block-diagonally
into the space of 2g-dimensional symplectic lattices.  Symplectic pairs are
the coordinate pairs (e_{2k-1}, e_{2k}), matching the block-diagonal form J.
"""

from dataclasses import dataclass

import numpy as np

from latgeo.core import (
    BasisMatrix,
    MinimalVectorSet,
    _echelon_basis,
    as_gram,
    gram_of,
    systole_data,
)

SYMPLECTIC_TOL = 1e-10

# Order-6 element of SL(2,Z) whose homography fixes the hexagonal point.
A0 = np.array([[1, -1], [1, 0]], dtype=np.int64)


@dataclass(frozen=True)
class UpperHalfPoint:
    """Point x + iy of the upper half plane (y > 0)."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not self.y > 0:
            raise ValueError("imaginary part must be positive")

    @property
    def z(self):
        return complex(self.x, self.y)


class SymplecticForm:
    """Alternating form with block-diagonal matrix built from 2x2 blocks."""

    def __init__(self, g):
        if g < 1:
            raise ValueError("genus must be >= 1")
        j2 = np.array([[0, -1], [1, 0]], dtype=np.int64)
        j = np.zeros((2 * g, 2 * g), dtype=np.int64)
        for k in range(g):
            j[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = j2
        self.g = g
        self.j = j


class SiegelPoint:
    """Symplectic basis matrix: A^T J A = J within SYMPLECTIC_TOL."""

    def __init__(self, a):
        a = np.array(a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] % 2:
            raise ValueError("Siegel point must be a square matrix of even size")
        g = a.shape[0] // 2
        j = standard_J(g).j
        if np.max(np.abs(a.T @ j @ a - j)) > SYMPLECTIC_TOL:
            raise ValueError("basis is not symplectic")
        if abs(np.linalg.det(a) - 1.0) > SYMPLECTIC_TOL:
            raise ValueError("symplectic basis must have determinant 1")
        self.a = a
        self.g = g


def standard_J(g):
    """The block-diagonal symplectic form on R^{2g}; J^2 = -I exactly."""
    return SymplecticForm(g)


def is_symplectic(a, tol=SYMPLECTIC_TOL):
    """Whether A^T J A = J entrywise within tol; rejects odd dimensions."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if a.shape[0] % 2:
        raise ValueError("symplectic matrices have even size")
    j = standard_J(a.shape[0] // 2).j
    return bool(np.max(np.abs(a.T @ j @ a - j)) <= tol)


def tau_to_basis(tau):
    """Covolume-1 basis of the lattice generated by 1 and tau."""
    if not tau.y > 0:
        raise ValueError("imaginary part must be positive")
    s = tau.y ** -0.5
    return BasisMatrix(np.array([[s, s * tau.x], [0.0, s * tau.y]]))


def hexagonal_point():
    """The sixth root of unity: the covolume-1 lattice of maximal systole."""
    return UpperHalfPoint(0.5, np.sqrt(3.0) / 2.0)


def mobius(m, tau):
    """Fractional linear action of a determinant-1 integer matrix on tau."""
    m = np.asarray(m)
    a, b, c, d = int(m[0, 0]), int(m[0, 1]), int(m[1, 0]), int(m[1, 1])
    if a * d - b * c != 1:
        raise ValueError("matrix must have determinant 1")
    z = (a * tau.z + b) / (c * tau.z + d)
    return UpperHalfPoint(z.real, z.imag)


def mobius_to_inner(m):
    """Integer change of basis matching the fractional linear action.

    For M = [[a, b], [c, d]], the lattice of M.tau is the old lattice with new
    basis (c tau + d, a tau + b), i.e. columns (d, c) and (b, a) in the old
    basis, so gram(M.tau) = U^T gram(tau) U with U = [[d, b], [c, a]].
    """
    m = np.asarray(m)
    a, b, c, d = int(m[0, 0]), int(m[0, 1]), int(m[1, 0]), int(m[1, 1])
    if a * d - b * c != 1:
        raise ValueError("matrix must have determinant 1")
    return np.array([[d, b], [c, a]], dtype=np.int64)


def product_embed(taus):
    """Block-diagonal sum of plane lattices, one per coordinate pair.

    The factors are orthogonal for both the euclidean form and J, so the
    result is a symplectic basis with block-diagonal Gram.
    """
    taus = list(taus)
    if not taus:
        raise ValueError("need at least one point")
    g = len(taus)
    a = np.zeros((2 * g, 2 * g))
    for k, tau in enumerate(taus):
        a[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = tau_to_basis(tau).entries
    return SiegelPoint(a)


def product_gram(taus):
    """Gram matrix of the block-diagonal product lattice."""
    return gram_of(BasisMatrix(product_embed(taus).a))


def restricted_form(m, form):
    """Matrix of the symplectic form on a Q-basis of the span of minimal vectors.

    The basis is selected by exact integer elimination in lexicographic vector
    order, so the output is deterministic.
    """
    vectors = m.vectors if isinstance(m, MinimalVectorSet) else np.asarray(m)
    picked, _ = _echelon_basis(vectors)
    basis = vectors[picked].astype(np.int64)
    return basis @ form.j @ basis.T


def in_bavard_set(p):
    """Whether the systole span is non-isotropic (J not identically zero on it)."""
    q = gram_of(BasisMatrix(p.a))
    m = systole_data(q)
    r = restricted_form(m, standard_J(p.g))
    return bool(np.any(r != 0))


def siegel_gram_identity_check(q, form, tol=1e-8):
    """Whether Q J Q = J within tol; holds identically for symplectic Grams.

    If Q = A^T A with A symplectic then Q J Q = A^T (A J A^T) A = J, since the
    symplectic group is closed under transpose.
    """
    q = as_gram(q)
    j = form.j.astype(float)
    return bool(np.max(np.abs(q.entries @ j @ q.entries - j)) <= tol)
