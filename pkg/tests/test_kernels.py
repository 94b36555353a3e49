import numpy as np
import pytest

from latgeo.errors import CapacityError, NotPositiveDefiniteError
from latgeo.kernels import pure
from latgeo.rng import random_conjugated_gram, stream

try:
    from latgeo.kernels import _speedups
except ImportError:
    _speedups = None

needs_compiled = pytest.mark.skipif(
    _speedups is None, reason="compiled kernel not built"
)

BACKENDS = [pure] + ([_speedups] if _speedups is not None else [])


def sample_grams(count=60):
    rng = stream(11, "kernel-tests")
    out = []
    for i in range(count):
        n = [2, 3, 4, 5][i % 4]
        out.append(random_conjugated_gram(rng, n))
    return out


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.BACKEND_NAME)
class TestLLLBackend:
    def test_transform_is_unimodular_and_consistent(self, backend):
        for q in sample_grams(30):
            red, u = backend.lll_reduce_gram(q)
            assert u.dtype == np.int64
            assert abs(abs(round(float(np.linalg.det(u)))) - 1) == 0
            assert np.allclose(u.T @ q @ u, red, atol=1e-9)

    def test_output_is_lll_reduced(self, backend):
        delta = 0.99
        for q in sample_grams(30):
            red, _ = backend.lll_reduce_gram(q, delta)
            mu, b = pure._gso_from_gram(red)
            n = red.shape[0]
            for i in range(n):
                for j in range(i):
                    assert abs(mu[i, j]) <= 0.5 + 1e-9
            for k in range(1, n):
                assert b[k] >= (delta - mu[k, k - 1] ** 2) * b[k - 1] - 1e-9

    def test_rejects_indefinite(self, backend):
        with pytest.raises(NotPositiveDefiniteError):
            backend.lll_reduce_gram(np.array([[1.0, 2.0], [2.0, 1.0]]))


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.BACKEND_NAME)
class TestEnumerationBackend:
    def test_small_cases(self, backend):
        # kernel-level sign convention: highest-index nonzero coordinate > 0
        vecs = backend.fincke_pohst(np.eye(2), 1.0, 100)
        assert sorted(map(tuple, vecs.tolist())) == [(0, 1), (1, 0)]
        vecs = backend.fincke_pohst(np.eye(2), 2.0, 100)
        assert sorted(map(tuple, vecs.tolist())) == [(-1, 1), (0, 1), (1, 0), (1, 1)]

    def test_up_to_sign_no_duplicates(self, backend):
        for q in sample_grams(20):
            bound = float(np.min(np.diag(q))) * 2.0
            vecs = backend.fincke_pohst(q, bound, 10**6)
            seen = set()
            for v in map(tuple, vecs.tolist()):
                assert v not in seen
                neg = tuple(-x for x in v)
                assert neg not in seen
                seen.add(v)

    def test_capacity(self, backend):
        with pytest.raises(CapacityError):
            backend.fincke_pohst(np.eye(2), 500.0, 5)

    def test_rejects_indefinite(self, backend):
        with pytest.raises(NotPositiveDefiniteError):
            backend.fincke_pohst(np.array([[1.0, 2.0], [2.0, 1.0]]), 1.0, 100)


@needs_compiled
class TestBackendParity:
    def test_lll_identical(self):
        for q in sample_grams(60):
            r1, u1 = pure.lll_reduce_gram(q)
            r2, u2 = _speedups.lll_reduce_gram(q)
            assert np.array_equal(u1, u2)
            assert np.array_equal(r1, r2)

    def test_enumeration_identical(self):
        rng = stream(12, "parity-enum")
        for q in sample_grams(60):
            red, _ = pure.lll_reduce_gram(q)
            bound = float(np.min(np.diag(red))) * rng.uniform(1.0, 4.0)
            v1 = pure.fincke_pohst(red, bound, 10**6)
            v2 = _speedups.fincke_pohst(red, bound, 10**6)
            assert np.array_equal(v1, v2)

    def test_selector(self):
        from latgeo import kernels

        before = kernels.BACKEND
        try:
            kernels._select("pure")
            assert kernels.BACKEND == "pure"
            kernels._select("compiled")
            assert kernels.BACKEND == "compiled"
        finally:
            kernels._select(before)
