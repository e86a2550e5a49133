"""Acceptance gate: ten end-to-end criteria, one printed verdict line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict lines
as they are produced (plain ``pytest`` shows them in the captured output of
any failing criterion).  Every criterion states its tolerance inline; all
comparisons are exact rationals unless a tolerance is named.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from fractions import Fraction

from gt_ergodica import (
    EMPTY,
    AffineTail,
    ConstantTail,
    PathPrefix,
    QContext,
    Signature,
    ThetaSpec,
    atom_mass,
    chain_partition_paths,
    chain_partition_young,
    classify,
    compose_same_level,
    cylinder_mass,
    enumerate_paths,
    lambda_of,
    paths_from_root,
    pushforward_mass_check,
    q_centrality_check,
    qdim,
    random_level_permutation,
    ratio_set_summary,
    rn_exponent,
    sample_path,
    weyl_dim,
)
from gt_ergodica.gt_graph import parse_path
from gt_ergodica.q_weights import path_weight_exponent
from gt_ergodica.ratio_set import (
    ChainPartition,
    RectYoungDiagram,
    brute_chain_partition,
    one_box_above,
    validate_partition,
)

HALF = QContext(Fraction(1, 2))
FOUR_FIFTHS = QContext(Fraction(4, 5))
STAIR = ThetaSpec((), AffineTail(1, 1))
IINF = ThetaSpec((0,), ConstantTail(1))
CONST2 = ThetaSpec((), ConstantTail(2))


def report(criterion: str, ok: bool, detail: str) -> None:
    print(f"{criterion} {'PASS' if ok else 'FAIL'} — {detail}", flush=True)
    assert ok, f"{criterion}: {detail}"


def small_signatures(max_level: int = 5, max_entry: int = 4):
    """Every signature of level <= max_level with entries in [0, max_entry]."""
    for n in range(1, max_level + 1):
        for combo in itertools.combinations_with_replacement(
            range(max_entry, -1, -1), n
        ):
            yield Signature(combo)


NEGATIVE_SAMPLE = [
    Signature((1, -1)),
    Signature((0, -2, -3)),
    Signature((2, 0, -1, -3)),
    Signature((-1, -1, -2)),
    Signature((3, 1, -2, -2, -4)),
]


def test_c1_weyl_dim_equals_exhaustive_path_count():
    t0 = time.perf_counter()
    checked = 0
    for sig in itertools.chain(small_signatures(), NEGATIVE_SAMPLE):
        expected = weyl_dim(sig)
        actual = len(list(enumerate_paths(EMPTY, sig)))
        assert actual == expected, (sig, actual, expected)
        checked += 1
    elapsed = time.perf_counter() - t0
    report(
        "C1",
        elapsed < 10,
        f"weyl_dim == exhaustive path count on {checked} signatures "
        f"(levels <= 5, entries in [0,4], plus negatives) in {elapsed:.2f}s (< 10s)",
    )


def test_c2_qdim_dp_matches_weighted_enumeration():
    t0 = time.perf_counter()
    checked = 0
    for sig in itertools.chain(small_signatures(), NEGATIVE_SAMPLE):
        paths = list(enumerate_paths(EMPTY, sig))
        exponents = [path_weight_exponent(p) for p in paths]
        for ctx in (HALF, FOUR_FIFTHS):
            by_sum = sum(ctx.q_power(e) for e in exponents)
            assert qdim(ctx, sig).value == by_sum, (sig, ctx.q)
        # q = 1 degeneration: every path weight becomes 1, so the weighted
        # sum collapses to the plain path count, i.e. the Weyl dimension.
        assert sum(Fraction(1) ** e for e in exponents) == weyl_dim(sig)
        checked += 1
    elapsed = time.perf_counter() - t0
    report(
        "C2",
        elapsed < 30,
        f"qdim DP == weighted path enumeration at q in {{1/2, 4/5}} and the "
        f"q=1 degeneration on {checked} signatures in {elapsed:.2f}s (< 30s)",
    )


def _distinguished_path(theta: ThetaSpec, depth: int) -> PathPrefix:
    return PathPrefix(EMPTY, tuple(lambda_of(theta, k) for k in range(1, depth + 1)))


def test_c3_constant_theta_single_atom_and_bounded_stabilization():
    for a in (1, 3):
        theta = ThetaSpec((), ConstantTail(a))
        for depth in range(1, 6):
            mass = cylinder_mass(theta, HALF, _distinguished_path(theta, depth))
            assert mass.value == 1, (a, depth, mass.value)
    masses = [
        cylinder_mass(IINF, HALF, _distinguished_path(IINF, n)).value
        for n in (2, 3, 4)
    ]
    spread = float(max(masses) - min(masses))
    atom = atom_mass(IINF, HALF)
    report(
        "C3",
        spread <= 1e-9 and atom.value > 0,
        "constant-theta distinguished cylinders have mass exactly 1 at depths "
        f"1..5; bounded-theta masses at n=2,3,4 agree within {spread:.2e} "
        f"(<= 1e-9) and the atom mass {float(atom.value):.6f} is positive",
    )


def test_c4_bounded_nonconstant_dimension_growth():
    dims = [weyl_dim(lambda_of(IINF, n)) for n in range(2, 31)]
    ok = dims == list(range(2, 31))
    report(
        "C4",
        ok,
        "weyl_dim(lambda(n)) == n for n = 2..30 under theta = (0,1,1,...), "
        f"strictly increasing to {dims[-1]}",
    )


def test_c5_q_centrality_and_normalization():
    worst_dev = Fraction(0)
    worst_sum_gap = Fraction(0)
    for theta in (CONST2, IINF, STAIR):
        for level in range(1, 5):
            check = q_centrality_check(theta, HALF, level)
            assert check["pass"], (theta, level, check)
            worst_dev = max(worst_dev, check["worst_ratio_deviation"])
            worst_sum_gap = max(worst_sum_gap, abs(check["marginal_sum"] - 1))
    ok = float(worst_dev) <= 1e-6 and float(worst_sum_gap) <= 1e-6
    report(
        "C5",
        ok,
        "mass/weight constant per endpoint and marginals normalized for three "
        f"theta classes, levels <= 4, q = 1/2: worst ratio deviation "
        f"{float(worst_dev):.2e} (tol 1e-6), worst normalization gap "
        f"{float(worst_sum_gap):.2e} (tol 1e-6)",
    )


def test_c6_radon_nikodym_cocycle_pushforward_lattice():
    rng = random.Random(20260815)
    checked = 0
    worst_gap = 0.0
    for trial in range(100):
        level = rng.randint(1, 3)
        theta = (CONST2, IINF, STAIR)[trial % 3]
        # keep to the first few support endpoints: their cylinder masses
        # stop at shallow working depths, which keeps the measure-side
        # pushforward checks fast without changing what is being tested
        endpoints = _support(theta, level)[:6]
        picked = rng.sample(endpoints, min(len(endpoints), 2))
        gamma = random_level_permutation(level, picked, rng.randrange(2**32))
        delta = random_level_permutation(level, picked, rng.randrange(2**32))
        composed = compose_same_level(gamma, delta)
        for lam in picked:
            for alpha in paths_from_root(lam):
                # cocycle identity for delta-after-gamma, exactly on exponents
                lhs = rn_exponent(composed, alpha)
                rhs = rn_exponent(delta, gamma.apply(alpha)) + rn_exponent(
                    gamma, alpha
                )
                assert lhs == rhs, (lam, alpha)
                assert rn_exponent(gamma, alpha) % 2 == 0
                checked += 1
        alpha = paths_from_root(picked[0])[0]
        result = pushforward_mass_check(theta, HALF, gamma, alpha)
        assert result["exact"], (theta, alpha)
        gap = abs(
            float(result["image_mass"])
            - float(result["density"].value * result["mass"])
        )
        worst_gap = max(worst_gap, gap)
    ok = worst_gap <= 1e-9
    report(
        "C6",
        ok,
        f"cocycle identity exact on {checked} cylinder evaluations, pushforward "
        f"identity exact (worst float gap {worst_gap:.1e} <= 1e-9) for 100 "
        "random block permutations at levels <= 3, all densities even powers of q",
    )


def _support(theta: ThetaSpec, level: int):
    from gt_ergodica import support_at_level

    return support_at_level(theta, level, level + 6)


def _young_covers(a: RectYoungDiagram, b: RectYoungDiagram) -> bool:
    return one_box_above(a, b)


def test_c7_chain_partitions_young_and_paths():
    young_checked = 0
    brute_checked = 0
    for k in range(1, 5):
        for length in range(1, 5):
            floors = [
                combo
                for combo in itertools.combinations_with_replacement(
                    range(k, -1, -1), length
                )
                if combo[-1] == 0
            ]
            for floor_entries in floors:
                floor = RectYoungDiagram(k, length, floor_entries)
                partition = chain_partition_young(k, length, floor)
                validate_partition(partition, _young_covers)
                assert not partition.unchained
                young_checked += 1
                if len(partition.universe) <= 14:
                    found = brute_chain_partition(
                        list(partition.universe), _young_covers
                    )
                    assert found is not None
                    brute = ChainPartition(
                        tuple(partition.universe),
                        tuple(tuple(c) for c in found),
                    )
                    validate_partition(brute, _young_covers)
                    brute_checked += 1
    path_groups = 0
    unchained_total = 0
    for alpha_text in ("1", "2"):
        alpha = parse_path(alpha_text)
        for L in (3, 4):
            partition = chain_partition_paths(STAIR, HALF, alpha, L)
            for chain in partition.chains:
                assert len(chain) >= 2
                endpoint = chain[0].endpoint
                for first, second in zip(chain, chain[1:]):
                    assert second.endpoint == endpoint
                    assert (
                        path_weight_exponent(second)
                        - path_weight_exponent(first)
                        == 2
                    )
            unchained_total += len(partition.unchained)
            path_groups += 1
    report(
        "C7",
        True,
        f"{young_checked} diagram intervals (k,l <= 4) validated, "
        f"{brute_checked} cross-checked against brute-force chain cover; "
        f"path partitions for alpha in {{*->(1), *->(2)}}, L in {{3,4}} have "
        "chains >= 2 with exact q^2 steps and common endpoints "
        f"({unchained_total} forced interval-singletons disclosed as unchained)",
    )


def test_c8_ratio_certificate_every_cylinder_to_level_two():
    t0 = time.perf_counter()
    summary = ratio_set_summary(STAIR, HALF, level_cap=2, depth_cap=64)
    elapsed = time.perf_counter() - t0
    margins = []
    for cert in summary["certificates"]:
        assert cert["passes"], cert["alpha"]
        assert cert["margin"] > 0
        assert cert["rn_exponents"] == [2]
        assert cert["containment"]
        margins.append(cert["margin"] / cert["mass_alpha"])
    ok = summary["all_pass"] and summary["all_even"] and elapsed < 120
    report(
        "C8",
        ok,
        f"{summary['cylinders']} positive cylinders up to level 2 certified: "
        "advancing mass > (1/2) cylinder mass with strict margin (worst "
        f"relative margin {float(min(margins)):.4f}), density exactly q^2, "
        f"image contained, in {elapsed:.1f}s (< 120s) at depth_cap 64",
    )


def test_c9_classifier_ten_spec_matrix():
    matrix = [
        (ThetaSpec((), ConstantTail(1)), "I_1"),
        (ThetaSpec((), ConstantTail(3)), "I_1"),
        (ThetaSpec((), ConstantTail(7)), "I_1"),
        (ThetaSpec((0,), ConstantTail(1)), "I_inf"),
        (ThetaSpec((0, 0), ConstantTail(1)), "I_inf"),
        (ThetaSpec((1, 2), ConstantTail(5)), "I_inf"),
        (ThetaSpec((2,), ConstantTail(9)), "I_inf"),
        (ThetaSpec((), AffineTail(1, 1)), "III_q2"),
        (ThetaSpec((), AffineTail(0, 2)), "III_q2"),
        (ThetaSpec((0, 3), AffineTail(3, 1)), "III_q2"),
    ]
    for theta, expected in matrix:
        record = classify(theta)
        assert record.kind == expected, (theta, record)
    report("C9", True, "classifier exact on the 10-spec matrix (3x I_1, 4x I_inf, 3x III_q2)")


def test_c10_monte_carlo_depth_two():
    n = 100_000
    worst = 0.0
    for theta in (CONST2, IINF, STAIR):
        counts: dict[PathPrefix, int] = {}
        for i in range(n):
            path = sample_path(theta, HALF, 2, i)
            counts[path] = counts.get(path, 0) + 1
        for path, count in counts.items():
            p = cylinder_mass(theta, HALF, path).value
            assert p > 0
            sigma = math.sqrt(float(p * (1 - p)) / n)
            z = (count / n - float(p)) / sigma if sigma > 0 else 0.0
            worst = max(worst, abs(z))
        if theta is CONST2:
            assert len(counts) == 1
    ok = worst <= 3.0
    report(
        "C10",
        ok,
        f"3 x {n} samples at depth 2 (seed base 0): every sampled cylinder "
        f"within 3 binomial sigma of its exact mass (worst |z| = {worst:.2f})",
    )
