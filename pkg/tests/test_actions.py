import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latgeo import actions, core, siegel
from latgeo.errors import OrderNotFoundError
from latgeo.rng import random_spd_gram, stream

GENERIC_2 = np.array([[2.0, 0.3], [0.3, 1.0]])
GENERIC_4 = np.array(
    [
        [2.0, 0.3, 0.1, 0.0],
        [0.3, 1.0, 0.0, 0.2],
        [0.1, 0.0, 1.5, 0.1],
        [0.0, 0.2, 0.1, 1.1],
    ]
)

DUAL_2 = actions.Automorphism(
    conjugator=np.eye(2, dtype=np.int64), pre_dual=True, label="dual"
)


class TestAct:
    def test_identity(self):
        a = actions.Automorphism(conjugator=np.eye(2, dtype=np.int64))
        assert np.allclose(actions.act(a, GENERIC_2).entries, GENERIC_2)

    def test_dual_on_diagonal(self):
        out = actions.act(DUAL_2, np.diag([2.0, 0.5]))
        assert np.allclose(out.entries, np.diag([0.5, 2.0]), atol=1e-15)

    def test_hexagonal_stabilizer(self, hex_gram):
        u0 = siegel.mobius_to_inner(siegel.A0)
        inner = actions.Automorphism(conjugator=u0)
        assert np.allclose(actions.act(inner, hex_gram).entries, hex_gram.entries)

    def test_preserves_determinant_and_pd(self):
        rng = stream(21, "act-welldef")
        u0 = siegel.mobius_to_inner(siegel.A0)
        gens = [
            DUAL_2,
            actions.Automorphism(conjugator=u0),
            actions.Automorphism(conjugator=u0, pre_dual=True),
        ]
        for _ in range(100):
            q = random_spd_gram(rng, 2)
            for a in gens:
                out = actions.act(a, q)
                assert abs(out.det() - core.as_gram(q).det()) < 1e-10
                np.linalg.cholesky(out.entries)  # stays positive definite

    def test_dual_is_involution(self):
        rng = stream(22, "dual-involution")
        for _ in range(20):
            q = random_spd_gram(rng, 3)
            dual = actions.Automorphism(
                conjugator=np.eye(3, dtype=np.int64), pre_dual=True
            )
            back = actions.act(dual, actions.act(dual, q))
            assert np.max(np.abs(back.entries - q)) < 1e-10

    def test_rejects_non_unimodular(self):
        with pytest.raises(ValueError):
            actions.Automorphism(conjugator=np.diag([2, 1]))


class TestGeneratorOrder:
    def test_dual_orders(self):
        assert actions.generator_order(DUAL_2, np.eye(2)) == 1
        assert actions.generator_order(DUAL_2, GENERIC_2) == 2

    def test_hexagonal_rotation_point_order(self):
        # U0 has matrix order 6, but U0^3 = -I acts trivially on Grams, so
        # the point order is 3.
        u0 = siegel.mobius_to_inner(siegel.A0)
        inner = actions.Automorphism(conjugator=u0)
        assert actions.generator_order(inner, GENERIC_2) == 3
        assert np.array_equal(
            np.linalg.matrix_power(u0, 6), np.eye(2, dtype=np.int64)
        )
        assert np.array_equal(
            np.linalg.matrix_power(u0, 3), -np.eye(2, dtype=np.int64)
        )

    def test_sign_flip(self):
        d = actions.Automorphism(conjugator=actions._sign_flip(2, 1))
        assert actions.generator_order(d, GENERIC_4) == 2

    def test_infinite_order_rejected(self):
        shear = actions.Automorphism(
            conjugator=np.array([[1, 1], [0, 1]], dtype=np.int64)
        )
        with pytest.raises(OrderNotFoundError):
            actions.generator_order(shear, GENERIC_2)


class TestIsFixedPoint:
    def test_trivial_group(self):
        assert actions.is_fixed_point([], GENERIC_4)

    def test_sign_flip_fixes_block_diagonal(self):
        g = [actions.Automorphism(conjugator=actions._sign_flip(2, 1))]
        rng = stream(23, "flip-fixed")
        for _ in range(10):
            tau1 = siegel.UpperHalfPoint(rng.uniform(-0.5, 0.5), rng.uniform(0.6, 2))
            tau2 = siegel.UpperHalfPoint(rng.uniform(-0.5, 0.5), rng.uniform(0.6, 2))
            q = siegel.product_gram([tau1, tau2])
            assert actions.is_fixed_point(g, q)

    def test_sign_flip_rejects_off_blocks(self):
        g = [actions.Automorphism(conjugator=actions._sign_flip(2, 1))]
        assert not actions.is_fixed_point(g, GENERIC_4)


class TestSubgroupH:
    def test_g2_generators(self):
        group = actions.subgroup_H(2)
        mats = [a.conjugator.tolist() for a in group.generators]
        flip2 = np.diag([1, 1, -1, -1]).tolist()
        flip1 = np.diag([-1, -1, 1, 1]).tolist()
        u0 = siegel.mobius_to_inner(siegel.A0)
        chain = np.eye(4, dtype=np.int64)
        chain[2:, 2:] = u0
        assert flip1 in mats and flip2 in mats and chain.tolist() in mats
        assert not any(a.pre_dual for a in group.generators)

    def test_generators_symplectic(self):
        for g in (2, 3):
            for a in actions.subgroup_H(g).generators:
                assert siegel.is_symplectic(a.conjugator.astype(float))

    def test_generators_finite_order(self):
        probe = core.as_gram(random_spd_gram(stream(24, "order-probe"), 4))
        for a in actions.subgroup_H(2).generators:
            assert actions.generator_order(a, probe) <= 12

    def test_fixes_hex_slice(self):
        group = actions.subgroup_H(2)
        rng = stream(25, "H-fixed")
        for _ in range(10):
            tau = siegel.UpperHalfPoint(rng.uniform(-0.5, 0.5), rng.uniform(0.6, 2))
            q = actions._product_with_hex(tau)
            assert actions.is_fixed_point(group, q)

    def test_moves_non_hex_second_factor(self):
        q = siegel.product_gram(
            [siegel.UpperHalfPoint(0.0, 1.0), siegel.UpperHalfPoint(0.0, 1.3)]
        )
        assert not actions.is_fixed_point(actions.subgroup_H(2), q)

    def test_needs_g_at_least_two(self):
        with pytest.raises(ValueError):
            actions.subgroup_H(1)


class TestThm12Group:
    def test_even_fixed_set_is_symplectic_locus(self):
        group = actions.thm12_group(4)
        rng = stream(26, "thm12-even")
        for _ in range(10):
            tau1 = siegel.UpperHalfPoint(rng.uniform(-0.5, 0.5), rng.uniform(0.6, 2))
            tau2 = siegel.UpperHalfPoint(rng.uniform(-0.5, 0.5), rng.uniform(0.6, 2))
            q = siegel.product_gram([tau1, tau2])
            assert actions.is_fixed_point(group, q)
            assert siegel.siegel_gram_identity_check(q, siegel.standard_J(2))
        for _ in range(10):
            q = random_spd_gram(rng, 4)
            fixed = actions.is_fixed_point(group, q)
            identity = siegel.siegel_gram_identity_check(
                q, siegel.standard_J(2), tol=1e-8
            )
            assert fixed == identity == False  # noqa: E712

    def test_odd_group_fixes_hex_tower(self):
        group = actions.thm12_group(3)
        q = np.zeros((3, 3))
        q[0, 0] = 1.0
        q[1:, 1:] = actions._hex_gram()
        assert actions.is_fixed_point(group, core.as_gram(q))

    def test_odd_group_generator_count(self):
        # alpha-tilde, corner flip, p plane flips, hexagonal chain
        for p in (1, 2):
            group = actions.thm12_group(2 * p + 1)
            assert len(group.generators) == p + 3

    def test_small_n_rejected(self):
        with pytest.raises(ValueError):
            actions.thm12_group(2)


class TestFundamentalDomain:
    def test_interior_point_fixed(self):
        tau, word = actions.fundamental_domain_reduce(siegel.UpperHalfPoint(0.0, 1.0))
        assert word == []
        assert (tau.x, tau.y) == (0.0, 1.0)

    def test_translation(self):
        tau0 = siegel.hexagonal_point()
        tau, word = actions.fundamental_domain_reduce(
            siegel.UpperHalfPoint(tau0.x + 1.0, tau0.y)
        )
        assert word == [("T", -1)]
        assert abs(tau.z - tau0.z) < 1e-12

    def test_left_corner_folds_to_hexagonal_point(self):
        tau0 = siegel.hexagonal_point()
        tau, _ = actions.fundamental_domain_reduce(
            siegel.UpperHalfPoint(tau0.x - 1.0, tau0.y)
        )
        assert abs(tau.z - tau0.z) < 1e-12

    def test_roundtrip_and_invariants(self):
        rng = stream(27, "fundamental-domain")
        for _ in range(200):
            tau = siegel.UpperHalfPoint(rng.uniform(-6, 6), rng.uniform(0.02, 4))
            reduced, word = actions.fundamental_domain_reduce(tau)
            assert abs(reduced.x) <= 0.5 + 1e-12
            assert abs(reduced.z) >= 1.0 - 1e-12
            via_word = siegel.mobius(actions.word_matrix(word), tau)
            assert abs(via_word.z - reduced.z) < 1e-10

    @given(st.floats(-20.0, 20.0), st.floats(1e-3, 10.0))
    @settings(max_examples=80, deadline=None)
    def test_reduction_properties(self, x, y):
        tau = siegel.UpperHalfPoint(x, y)
        reduced, word = actions.fundamental_domain_reduce(tau)
        assert abs(reduced.x) <= 0.5 + 1e-12
        assert abs(reduced.z) >= 1.0 - 1e-12
        m = actions.word_matrix(word)
        assert round(float(np.linalg.det(m))) == 1
        via_word = siegel.mobius(m, tau)
        assert abs(via_word.z - reduced.z) < 1e-9
        # the reduced point is a fixed point of its own reduction
        again, again_word = actions.fundamental_domain_reduce(reduced)
        assert again_word == []
        assert abs(again.z - reduced.z) < 1e-15


class TestClaimScan:
    def test_small_grid(self):
        report = actions.claim_scan_g2(steps=(21, 13))
        assert report.passed
        assert report.flags["hex_corner_probes_hit"]
        grid_hits = [h for h in report.hits if not h["probe"]]
        step = math.hypot(1.0 / 20, (2.0 - actions.CLAIM_REGION[2]) / 12)
        tau0 = siegel.hexagonal_point()
        for h in grid_hits:
            reduced, _ = actions.fundamental_domain_reduce(
                siegel.UpperHalfPoint(h["re"], h["im"])
            )
            assert math.hypot(reduced.x - tau0.x, reduced.y - tau0.y) <= step + 1e-9

    def test_grid_containing_corners_hits_them(self):
        # Im range starting exactly at Im(tau0) puts both corner orbit points
        # on the grid; they must be the only hits and have stratum 4.
        tau0 = siegel.hexagonal_point()
        report = actions.claim_scan_g2(region=(-0.5, 0.5, tau0.y, 2.0), steps=(11, 7))
        grid_hits = [h for h in report.hits if not h["probe"]]
        assert len(grid_hits) == 2
        assert {h["re"] for h in grid_hits} == {-0.5, 0.5}
        assert all(h["stratum"] == 4 for h in grid_hits)
        assert report.passed

    def test_region_validation(self):
        with pytest.raises(ValueError):
            actions.claim_scan_g2(region=(-0.7, 0.5, 0.9, 2.0), steps=(5, 5))

    def test_probe_systole_value(self):
        report = actions.claim_scan_g2(steps=(5, 4))
        probes = [h for h in report.hits if h["probe"]]
        for h in probes:
            assert h["systole_sq"] == pytest.approx(2.0 / math.sqrt(3.0), rel=1e-9)


class TestVerifyThm12Odd:
    @pytest.mark.parametrize("p", [1, 2])
    def test_passes(self, p):
        report = actions.verify_thm12_odd(p, seed=0)
        assert report.passed

    def test_detects_broken_fixture(self):
        # perturbing the tower must break fixedness for some generator
        q = np.zeros((3, 3))
        q[0, 0] = 1.0
        q[1:, 1:] = actions._hex_gram()
        q[0, 1] = q[1, 0] = 1e-2
        assert not actions.is_fixed_point(actions.thm12_group(3), core.as_gram(q))

    def test_p_validation(self):
        with pytest.raises(ValueError):
            actions.verify_thm12_odd(0)


def test_homography_and_gram_pictures_agree():
    """mobius(A0) fixes tau iff the inner U0 action fixes the tau Gram."""
    u0 = siegel.mobius_to_inner(siegel.A0)
    inner = actions.Automorphism(conjugator=u0)
    rng = stream(28, "pictures")
    tau0 = siegel.hexagonal_point()
    samples = [tau0] + [
        siegel.UpperHalfPoint(rng.uniform(-0.5, 0.5), rng.uniform(0.6, 2.0))
        for _ in range(20)
    ]
    for tau in samples:
        gram = core.gram_of(siegel.tau_to_basis(tau))
        moved = siegel.mobius(siegel.A0, tau)
        homography_fixes = abs(moved.z - tau.z) < 1e-9
        gram_fixes = actions.is_fixed_point([inner], gram, tol=1e-9)
        assert homography_fixes == gram_fixes
