"""Shared fixtures and hypothesis strategies for the test suite."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from gt_ergodica.gt_graph import EMPTY, Signature, enumerate_paths
from gt_ergodica.q_weights import QContext


@pytest.fixture(scope="session")
def half() -> QContext:
    return QContext(Fraction(1, 2))


@pytest.fixture(scope="session")
def four_fifths() -> QContext:
    return QContext(Fraction(4, 5))


def signature_strategy(max_level: int = 5, lo: int = -3, hi: int = 4):
    """Random signatures with bounded level and entry range."""

    def build(draw_result):
        return Signature(tuple(sorted(draw_result, reverse=True)))

    return st.lists(st.integers(lo, hi), min_size=0, max_size=max_level).map(
        lambda xs: Signature(tuple(sorted(xs, reverse=True)))
    )


def nonroot_signature_strategy(max_level: int = 5, lo: int = -3, hi: int = 4):
    return st.lists(st.integers(lo, hi), min_size=1, max_size=max_level).map(
        lambda xs: Signature(tuple(sorted(xs, reverse=True)))
    )


def path_strategy(max_level: int = 4, lo: int = 0, hi: int = 3):
    """A random path from the root: pick an endpoint, then pick one of its paths."""

    def pick(args):
        sig, index = args
        paths = enumerate_paths(EMPTY, sig)
        return paths[index % len(paths)]

    return st.tuples(
        nonroot_signature_strategy(max_level, lo, hi), st.integers(0, 10 ** 6)
    ).map(pick)
