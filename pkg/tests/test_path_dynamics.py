"""Endpoint-fixing transformations: action, densities, cocycle algebra."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gt_ergodica.errors import DomainError
from gt_ergodica.gt_graph import (
    EMPTY,
    PathPrefix,
    Signature,
    all_signatures,
    enumerate_paths,
    paths_from_root,
    weyl_dim,
)
from gt_ergodica.path_dynamics import (
    LevelPermutation,
    SegmentShift,
    apply,
    block_transposition,
    compose_same_level,
    inverse,
    pushforward_mass_check,
    random_level_permutation,
    rn_exponent,
    rn_on_cylinder,
    rn_value_lattice_check,
)
from gt_ergodica.q_weights import QContext
from gt_ergodica.theta_measures import AffineTail, ConstantTail, ThetaSpec

HALF = QContext(Fraction(1, 2))
STAIR = ThetaSpec((), AffineTail(1, 1))
BOUNDED = ThetaSpec((0,), ConstantTail(1))


def sig(*entries):
    return Signature(entries)


LEVEL2_ENDPOINTS = [sig(2, 1), sig(1, 0), sig(2, 0), sig(1, 1)]


class TestLevelPermutation:
    def test_validation(self):
        with pytest.raises(DomainError):
            LevelPermutation(0, ())
        with pytest.raises(DomainError):
            LevelPermutation(2, ((sig(1), (0,)),))  # endpoint at wrong level
        with pytest.raises(DomainError):
            LevelPermutation(2, ((sig(1, 0), (0, 0)),))  # not a permutation
        with pytest.raises(DomainError):
            LevelPermutation(
                2, ((sig(1, 0), (0, 1)), (sig(1, 0), (1, 0)))
            )  # duplicate block

    def test_transposition_swaps_and_involutes(self):
        tau = block_transposition(sig(1, 0), 0, 1)
        a, b = paths_from_root(sig(1, 0))
        assert tau.apply(a) == b
        assert tau.apply(b) == a
        assert tau.apply(tau.apply(a)) == a

    def test_identity_off_blocks_and_above(self):
        tau = block_transposition(sig(1, 0), 0, 1)
        other = paths_from_root(sig(2, 0))[0]
        assert tau.apply(other) == other
        # upper portion is transported unchanged
        longer = paths_from_root(sig(1, 0))[0].extended(sig(1, 1, 0))
        moved = tau.apply(longer)
        assert moved.steps[2] == sig(1, 1, 0)
        assert moved.prefix(2) == paths_from_root(sig(1, 0))[1]

    def test_too_short_path_rejected(self):
        tau = block_transposition(sig(1, 0), 0, 1)
        with pytest.raises(DomainError):
            tau.apply(PathPrefix(EMPTY, (sig(1),)))
        with pytest.raises(DomainError):
            tau.apply(PathPrefix(sig(1), (sig(1, 0),)))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
    def test_random_permutations_are_bijections(self, seed_a, seed_b):
        gamma = random_level_permutation(2, LEVEL2_ENDPOINTS, seed=seed_a)
        for lam in LEVEL2_ENDPOINTS:
            block = paths_from_root(lam)
            images = {gamma.apply(w) for w in block}
            assert images == set(block)

    def test_compose_and_inverse(self):
        a = random_level_permutation(2, LEVEL2_ENDPOINTS[:2], seed=5)
        b = random_level_permutation(2, LEVEL2_ENDPOINTS[1:], seed=9)
        ab = compose_same_level(b, a)  # acts as b first, then a
        inv = inverse(a)
        for lam in LEVEL2_ENDPOINTS:
            for w in paths_from_root(lam):
                assert ab.apply(w) == a.apply(b.apply(w))
                assert inv.apply(a.apply(w)) == w
        with pytest.raises(DomainError):
            compose_same_level(a, block_transposition(sig(1, 1, 0), 0, 1))


class TestDensities:
    def test_transposition_exponents(self):
        tau = block_transposition(sig(1, 0), 0, 1)
        a, b = paths_from_root(sig(1, 0))
        assert rn_exponent(tau, a) == 2
        assert rn_exponent(tau, b) == -2
        assert rn_on_cylinder(HALF, tau, a).value == Fraction(1, 4)
        assert rn_on_cylinder(HALF, tau, a).pure_power == 2

    def test_identity_density_is_one(self):
        tau = block_transposition(sig(1, 0), 0, 1)
        untouched = paths_from_root(sig(2, 1))[0]
        assert rn_exponent(tau, untouched) == 0

    def test_shallow_cylinder_rejected(self):
        tau = block_transposition(sig(1, 1, 0), 0, 1)
        with pytest.raises(DomainError):
            rn_exponent(tau, paths_from_root(sig(1, 0))[0])

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_cocycle_identity_exact(self, seed):
        a = random_level_permutation(2, LEVEL2_ENDPOINTS, seed=seed)
        b = random_level_permutation(2, LEVEL2_ENDPOINTS, seed=seed + 1)
        ab = compose_same_level(b, a)
        for lam in LEVEL2_ENDPOINTS:
            for w in paths_from_root(lam):
                assert rn_exponent(ab, w) == rn_exponent(a, b.apply(w)) + rn_exponent(
                    b, w
                )
                assert rn_exponent(inverse(a), a.apply(w)) == -rn_exponent(a, w)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_exponents_are_even(self, seed):
        endpoints = [s for s in all_signatures(3, 0, 3) if weyl_dim(s) > 1]
        gamma = random_level_permutation(3, endpoints, seed=seed)
        report = rn_value_lattice_check(
            HALF, [gamma], [w for lam in endpoints for w in paths_from_root(lam)]
        )
        assert report["all_even"]
        assert report["applicable"] == sum(weyl_dim(s) for s in endpoints)


class TestPushforward:
    @pytest.mark.parametrize("theta", [STAIR, BOUNDED])
    def test_exact_on_positive_and_zero_cylinders(self, theta):
        for lam in LEVEL2_ENDPOINTS:
            n = weyl_dim(lam)
            for i in range(n):
                for j in range(i + 1, n):
                    tau = block_transposition(lam, i, j)
                    for w in paths_from_root(lam):
                        report = pushforward_mass_check(
                            theta, HALF, tau, w, depth_cap=16
                        )
                        assert report["exact"], report

    def test_positive_mass_signal(self):
        # both routes to (2,1) carry positive staircase mass, so the
        # identity is checked away from the trivial 0 == 0 case
        tau = block_transposition(sig(2, 1), 0, 1)
        for w in paths_from_root(sig(2, 1)):
            report = pushforward_mass_check(STAIR, HALF, tau, w, depth_cap=16)
            assert report["mass"] > 0
            assert report["image_mass"] > 0
            assert report["exact"]


class TestSegmentShift:
    def _make_shift(self):
        # segments from (1) at level 1 to (3,1,1) at level 3: the middle
        # step runs through (1,1), (2,1), (3,1), a full q^2-ratio chain
        base = PathPrefix(EMPTY, (sig(1),))
        chain = tuple(
            sorted(
                enumerate_paths(sig(1), sig(3, 1, 1)),
                key=lambda s: sum(x.size for x in s.steps[:-1]),
            )
        )
        return base, chain

    def test_cyclic_action_and_density(self):
        base, chain = self._make_shift()
        assert len(chain) == 3
        shift = SegmentShift(base, 3, (chain,))
        for pos, segment in enumerate(chain):
            omega = base.concat(segment)
            image = shift.apply(omega)
            expected = base.concat(chain[(pos + 1) % len(chain)])
            assert image == expected
            k = rn_exponent(shift, omega)
            if pos < len(chain) - 1:
                assert k == 2
            else:
                assert k == 2 * (1 - len(chain))
        assert shift.advancing_segments() == list(chain[:-1])
        assert shift.moved_segments() == list(chain)

    def test_fixes_other_prefixes_and_segments(self):
        base, chain = self._make_shift()
        shift = SegmentShift(base, 3, (chain,))
        # a path through another base is untouched
        other = PathPrefix(EMPTY, (sig(2), sig(2, 0), sig(2, 2, 0)))
        assert shift.apply(other) == other
        assert rn_exponent(shift, other) == 0
        # a segment to a different upper endpoint is untouched
        outside = enumerate_paths(sig(1), sig(3, 3, 1))
        assert len(outside) == 1
        omega = base.concat(outside[0])
        assert shift.apply(omega) == omega
        assert rn_exponent(shift, omega) == 0
        # the rewritten portion carries any continuation along
        longer = base.concat(chain[0]).extended(sig(3, 2, 1, 1))
        moved = shift.apply(longer)
        assert moved.prefix(3) == base.concat(chain[1])
        assert moved.steps[3] == sig(3, 2, 1, 1)

    def test_validation(self):
        base, chain = self._make_shift()
        with pytest.raises(DomainError):
            SegmentShift(base, 3, ((chain[0],),))  # singleton chain
        with pytest.raises(DomainError):
            SegmentShift(base, 3, ((chain[0], chain[0]),))  # repeated segment
        with pytest.raises(DomainError):
            SegmentShift(base, 3, ((chain[1], chain[0]),))  # wrong orientation
        with pytest.raises(DomainError):
            SegmentShift(base, 2, (chain,))  # horizon too close
        bad_start = PathPrefix(sig(1), (sig(1, 0),))
        with pytest.raises(DomainError):
            SegmentShift(bad_start, 3, (chain,))

    def test_pushforward_identity(self):
        base, chain = self._make_shift()
        shift = SegmentShift(base, 3, (chain,))
        for segment in chain:
            omega = base.concat(segment)
            report = pushforward_mass_check(STAIR, HALF, shift, omega, depth_cap=16)
            assert report["exact"]

    def test_pushforward_identity_with_positive_mass(self):
        # (3,2,1) clears the staircase reachability window, so both sides
        # of the identity are strictly positive
        base = PathPrefix(EMPTY, (sig(1),))
        chain = tuple(
            sorted(
                enumerate_paths(sig(1), sig(3, 2, 1)),
                key=lambda s: sum(x.size for x in s.steps[:-1]),
            )
        )
        assert len(chain) == 2
        shift = SegmentShift(base, 3, (chain,))
        for segment in chain:
            omega = base.concat(segment)
            report = pushforward_mass_check(STAIR, HALF, shift, omega, depth_cap=16)
            assert report["exact"]
            assert report["mass"] > 0
            assert report["image_mass"] > 0
