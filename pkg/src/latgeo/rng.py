"""Seeded randomness for verification suites and tests.

The generator is SplitMix64: 64-bit state advanced by the golden-gamma
constant, output mixed by two xor-shift-multiply rounds.  It is trivially
portable, so a seed fully determines every suite's inputs.  Each check derives
its own stream from (seed, label) to stay independent of check ordering.
"""

import numpy as np

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & _MASK

    def next_u64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return (z ^ (z >> 31)) & _MASK

    def uniform(self, lo=0.0, hi=1.0):
        return lo + (hi - lo) * (self.next_u64() >> 11) * 2.0 ** -53

    def randint(self, lo, hi):
        """Uniform integer in [lo, hi] inclusive."""
        return lo + self.next_u64() % (hi - lo + 1)

    def choice(self, seq):
        return seq[self.next_u64() % len(seq)]


def stream(seed, label):
    """Independent generator for one named check under a global seed."""
    h = 0xCBF29CE484222325
    for ch in label.encode():
        h = ((h ^ ch) * 0x100000001B3) & _MASK
    return SplitMix64((seed & _MASK) ^ h)


def random_unimodular(rng, n, max_entry=3, max_tries=1000):
    """Integer matrix of determinant +-1 with entries bounded by max_entry.

    Built as a short product of elementary shears and sign/permutation moves,
    rejecting products that overflow the entry bound.
    """
    for _ in range(max_tries):
        u = np.eye(n, dtype=np.int64)
        for _ in range(rng.randint(2, 3 * n)):
            i = rng.randint(0, n - 1)
            j = rng.randint(0, n - 1)
            if i == j:
                continue
            kind = rng.randint(0, 2)
            if kind == 0:
                u[:, j] += rng.choice([-1, 1]) * u[:, i]
            elif kind == 1:
                u[:, [i, j]] = u[:, [j, i]]
            else:
                u[:, i] *= -1
        if np.max(np.abs(u)) <= max_entry and np.any(u != np.eye(n, dtype=np.int64)):
            return u
    raise RuntimeError("failed to sample a bounded unimodular matrix")


def random_diagonal_gram(rng, n, lo=0.5, hi=4.0):
    """Diagonal positive definite Gram with spread-limited entries."""
    return np.diag([rng.uniform(lo, hi) for _ in range(n)])


def random_conjugated_gram(rng, n, lo=0.5, hi=4.0, max_entry=3):
    """Random unimodular conjugate of a random diagonal Gram."""
    d = random_diagonal_gram(rng, n, lo, hi)
    u = random_unimodular(rng, n, max_entry=max_entry)
    return u.T @ d @ u


def random_tau(rng, re=(-0.5, 0.5), im=(0.8, 2.0)):
    from latgeo.siegel import UpperHalfPoint

    return UpperHalfPoint(rng.uniform(*re), rng.uniform(*im))


def random_sl2_word(rng, max_len=5):
    """Word in the translation and inversion generators of SL(2,Z)."""
    t = np.array([[1, 1], [0, 1]], dtype=np.int64)
    s = np.array([[0, -1], [1, 0]], dtype=np.int64)
    tinv = np.array([[1, -1], [0, 1]], dtype=np.int64)
    m = np.eye(2, dtype=np.int64)
    for _ in range(rng.randint(1, max_len)):
        m = m @ rng.choice([t, tinv, s])
    return m


def _symplectic_generators(g):
    """Small integer generators of the symplectic group for the 2x2-block form."""
    gens = []
    n = 2 * g
    for k in range(g):
        for m2 in (
            np.array([[1, 1], [0, 1]], dtype=np.int64),
            np.array([[1, -1], [0, 1]], dtype=np.int64),
            np.array([[0, -1], [1, 0]], dtype=np.int64),
        ):
            e = np.eye(n, dtype=np.int64)
            e[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = m2
            gens.append(e)
    # pair swaps and a cross-pair transvection mix the blocks
    for k in range(g):
        for l in range(k + 1, g):
            e = np.zeros((n, n), dtype=np.int64)
            for r in range(g):
                src = k if r == l else (l if r == k else r)
                e[2 * r : 2 * r + 2, 2 * src : 2 * src + 2] = np.eye(2, dtype=np.int64)
            gens.append(e)
            gens.append(_transvection(n, _unit(n, 2 * k) + _unit(n, 2 * l)))
            gens.append(_transvection(n, _unit(n, 2 * k + 1) + _unit(n, 2 * l)))
    return gens


def _unit(n, i):
    e = np.zeros(n, dtype=np.int64)
    e[i] = 1
    return e


def _transvection(n, a):
    """Symplectic transvection x -> x + w(x, a) a for the block-diagonal form."""
    from latgeo.siegel import standard_J

    j = standard_J(n // 2).j
    return np.eye(n, dtype=np.int64) + np.outer(a, j.T @ a)


def random_symplectic_basis(rng, g, length=8, max_entry=12, max_tries=1000):
    """Product of at most ``length`` standard symplectic generators, entry-bounded.

    The bound keeps A^T A well-conditioned enough that Q J Q = J holds to
    1e-8 in double precision.
    """
    gens = _symplectic_generators(g)
    for _ in range(max_tries):
        a = np.eye(2 * g, dtype=np.int64)
        for _ in range(rng.randint(1, length)):
            a = a @ rng.choice(gens)
        if np.max(np.abs(a)) <= max_entry:
            return a
    raise RuntimeError("failed to sample a bounded symplectic basis")


def random_spd_gram(rng, n, jitter=0.3):
    """Generic covolume-1 positive definite Gram (not symplectic in general)."""
    m = np.array([[rng.uniform(-1.0, 1.0) for _ in range(n)] for _ in range(n)])
    q = m.T @ m + jitter * np.eye(n)
    q /= np.linalg.det(q) ** (1.0 / n)
    return q
