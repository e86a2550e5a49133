"""Endpoint-fixing transformations of the path space and their densities.

Two kinds of transformation act on infinite paths by rewriting a finite
lower portion while fixing everything above:

* ``LevelPermutation`` permutes, for each level-n signature, the finite
  set of root paths reaching it (block-diagonal over endpoints);
* ``SegmentShift`` cyclically advances mid-segments between two levels
  along explicitly given chains, fixing all other paths pointwise.

Because endpoints are fixed, the image measure of a cylinder differs
from its mass by the weight ratio of the rewritten portion alone: the
density is constant on deep cylinders with value an even power of q.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import ContractViolationError, DomainError
from .gt_graph import (
    EMPTY,
    PathPrefix,
    Signature,
    paths_from_root,
    weyl_dim,
)
from .q_weights import QContext, QValue, weight_ratio_exponent
from .theta_measures import (
    DEFAULT_DEPTH_CAP,
    DEFAULT_EPS,
    ThetaSpec,
    cylinder_mass,
)

__all__ = [
    "LevelPermutation",
    "SegmentShift",
    "apply",
    "block_transposition",
    "compose_same_level",
    "inverse",
    "pushforward_mass_check",
    "random_level_permutation",
    "rn_exponent",
    "rn_on_cylinder",
    "rn_value_lattice_check",
]


@dataclass(frozen=True)
class LevelPermutation:
    """A permutation of root paths, block-diagonal over level-n endpoints.

    ``blocks`` maps each moved endpoint to a permutation of the indices
    of its root paths (in their canonical enumeration order); endpoints
    not listed are fixed pointwise, as is everything above ``level``.
    """

    level: int
    blocks: tuple[tuple[Signature, tuple[int, ...]], ...]

    def __post_init__(self) -> None:
        if self.level < 1:
            raise DomainError("level permutations act at level >= 1")
        seen = set()
        for lam, perm in self.blocks:
            if lam.level != self.level:
                raise DomainError(
                    f"block endpoint {lam.entries} is not at level {self.level}"
                )
            if lam in seen:
                raise DomainError(f"duplicate block for {lam.entries}")
            seen.add(lam)
            if sorted(perm) != list(range(weyl_dim(lam))):
                raise DomainError(
                    f"block for {lam.entries} is not a permutation of its "
                    f"{weyl_dim(lam)} paths"
                )

    def _perm_for(self, lam: Signature) -> Optional[tuple[int, ...]]:
        for endpoint, perm in self.blocks:
            if endpoint == lam:
                return perm
        return None

    def apply(self, omega: PathPrefix) -> PathPrefix:
        if omega.start != EMPTY:
            raise DomainError("transformations act on paths from the root")
        if omega.length < self.level:
            raise DomainError(
                f"path of length {omega.length} is too short for a level-"
                f"{self.level} permutation"
            )
        head = omega.prefix(self.level)
        perm = self._perm_for(head.endpoint)
        if perm is None:
            return omega
        block = paths_from_root(head.endpoint)
        new_head = block[perm[block.index(head)]]
        rest = PathPrefix(head.endpoint, omega.steps[self.level:])
        return new_head.concat(rest)


def block_transposition(lam: Signature, i: int, j: int) -> LevelPermutation:
    """Swap the i-th and j-th root paths to ``lam``, fix everything else."""
    n = weyl_dim(lam)
    if not (0 <= i < n and 0 <= j < n):
        raise DomainError(f"{lam.entries} has {n} paths; cannot swap {i},{j}")
    perm = list(range(n))
    perm[i], perm[j] = perm[j], perm[i]
    return LevelPermutation(lam.level, ((lam, tuple(perm)),))


def random_level_permutation(
    level: int, endpoints: Iterable[Signature], seed: int
) -> LevelPermutation:
    """Shuffle the root paths of each given endpoint, deterministically."""
    rng = random.Random(seed)
    blocks = []
    for lam in endpoints:
        perm = list(range(weyl_dim(lam)))
        rng.shuffle(perm)
        blocks.append((lam, tuple(perm)))
    return LevelPermutation(level, tuple(blocks))


def compose_same_level(
    first: LevelPermutation, second: LevelPermutation
) -> LevelPermutation:
    """The permutation acting as ``second`` after ``first``."""
    if first.level != second.level:
        raise DomainError("can only compose permutations of the same level")
    endpoints = {lam for lam, _ in first.blocks} | {lam for lam, _ in second.blocks}
    blocks = []
    for lam in sorted(endpoints):
        n = weyl_dim(lam)
        p1 = first._perm_for(lam) or tuple(range(n))
        p2 = second._perm_for(lam) or tuple(range(n))
        blocks.append((lam, tuple(p2[p1[i]] for i in range(n))))
    return LevelPermutation(first.level, tuple(blocks))


def inverse(gamma: LevelPermutation) -> LevelPermutation:
    blocks = []
    for lam, perm in gamma.blocks:
        inv = [0] * len(perm)
        for i, p in enumerate(perm):
            inv[p] = i
        blocks.append((lam, tuple(inv)))
    return LevelPermutation(gamma.level, tuple(blocks))


@dataclass(frozen=True)
class SegmentShift:
    """Cyclic advance along chains of mid-segments between two levels.

    Acts on paths through ``base`` (a root path to level N): the segment
    from level N to level ``horizon`` is replaced by the next segment in
    its chain, cyclically; paths through other prefixes, or whose segment
    lies in no chain, are fixed pointwise.  Each chain must consist of
    distinct segments sharing the endpoints of ``base.endpoint`` below
    and one common signature above, with consecutive weight ratio
    exactly q^2.
    """

    base: PathPrefix
    horizon: int
    chains: tuple[tuple[PathPrefix, ...], ...]
    _positions: dict = field(
        init=False, repr=False, compare=False, hash=False, default=None
    )

    def __post_init__(self) -> None:
        if self.base.start != EMPTY:
            raise DomainError("the base prefix must start at the root")
        n = self.base.endpoint.level
        if self.horizon <= n + 1:
            raise DomainError("the horizon must exceed the base level by two")
        positions = {}
        for ci, chain in enumerate(self.chains):
            if len(chain) < 2:
                raise DomainError("chains must contain at least two segments")
            for pos, segment in enumerate(chain):
                if segment.start != self.base.endpoint:
                    raise DomainError("segments must continue the base prefix")
                if segment.endpoint.level != self.horizon:
                    raise DomainError("segments must reach the horizon level")
                if segment.endpoint != chain[0].endpoint:
                    raise DomainError("a chain must share one upper endpoint")
                key = tuple(s.entries for s in segment.steps)
                if key in positions:
                    raise DomainError("chains must be disjoint")
                positions[key] = (ci, pos)
                if pos > 0:
                    k = weight_ratio_exponent(chain[pos - 1], segment)
                    if k != 2:
                        raise DomainError(
                            f"consecutive chain segments must carry ratio "
                            f"exponent 2, got {k}"
                        )
        object.__setattr__(self, "_positions", positions)

    @property
    def base_level(self) -> int:
        return self.base.endpoint.level

    def moved_segments(self) -> list[PathPrefix]:
        """Segments not fixed by the shift: every chain member."""
        return [segment for chain in self.chains for segment in chain]

    def advancing_segments(self) -> list[PathPrefix]:
        """Chain members mapped one step up (all but each chain's last)."""
        return [segment for chain in self.chains for segment in chain[:-1]]

    def apply(self, omega: PathPrefix) -> PathPrefix:
        if omega.start != EMPTY:
            raise DomainError("transformations act on paths from the root")
        if omega.length < self.horizon:
            raise DomainError(
                f"path of length {omega.length} is too short for a horizon-"
                f"{self.horizon} shift"
            )
        n = self.base_level
        if omega.prefix(n) != self.base:
            return omega
        key = tuple(s.entries for s in omega.steps[n:self.horizon])
        found = self._positions.get(key)
        if found is None:
            return omega
        ci, pos = found
        chain = self.chains[ci]
        replacement = chain[(pos + 1) % len(chain)]
        rest = PathPrefix(replacement.endpoint, omega.steps[self.horizon:])
        return self.base.concat(replacement).concat(rest)


Transformation = Union[LevelPermutation, SegmentShift]


def apply(gamma: Transformation, omega: PathPrefix) -> PathPrefix:
    return gamma.apply(omega)


def _acting_depth(gamma: Transformation) -> int:
    return gamma.level if isinstance(gamma, LevelPermutation) else gamma.horizon


def rn_exponent(gamma: Transformation, alpha: PathPrefix) -> int:
    """The q-exponent of the image-to-source mass ratio on C_alpha.

    For alpha at least as deep as the rewritten portion, gamma maps
    C_alpha bijectively onto C_{gamma(alpha)} and the endpoint-relative
    factor cancels, so the ratio is the path weight ratio: an even power
    of q.
    """
    if alpha.length < _acting_depth(gamma):
        raise DomainError(
            "the density is constant only on cylinders at least as deep as "
            "the rewritten portion"
        )
    image = gamma.apply(alpha)
    if image.endpoint != alpha.endpoint:
        raise ContractViolationError("transformations must fix endpoints")
    k = weight_ratio_exponent(alpha, image)
    if k % 2 != 0:
        raise ContractViolationError(f"density exponent {k} is odd")
    return k


def rn_on_cylinder(
    ctx: QContext, gamma: Transformation, alpha: PathPrefix
) -> QValue:
    k = rn_exponent(gamma, alpha)
    return QValue(ctx.q_power(k), k)


def pushforward_mass_check(
    theta: ThetaSpec,
    ctx: QContext,
    gamma: Transformation,
    alpha: PathPrefix,
    eps: Fraction = DEFAULT_EPS,
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> dict:
    """Verify mass(gamma C_alpha) == density * mass(C_alpha) exactly.

    Both cylinders share their endpoint, hence their depth schedule; at
    the matched stopping depth the identity holds with no tolerance.
    """
    image = gamma.apply(alpha)
    density = rn_on_cylinder(ctx, gamma, alpha)
    source = cylinder_mass(theta, ctx, alpha, eps, depth_cap)
    target = cylinder_mass(theta, ctx, image, eps, depth_cap)
    if source.depth != target.depth:
        raise ContractViolationError("matched cylinders stopped at different depths")
    return {
        "alpha": alpha,
        "image": image,
        "density": density,
        "mass": source.value,
        "image_mass": target.value,
        "depth": source.depth,
        "exact": target.value == density.value * source.value,
    }


def rn_value_lattice_check(
    ctx: QContext,
    gammas: Sequence[Transformation],
    alphas: Sequence[PathPrefix],
) -> dict:
    """Histogram the density exponents of every applicable (gamma, alpha).

    All exponents must be even: densities live in the group of powers of
    q^2.
    """
    histogram: dict[int, int] = {}
    applicable = 0
    for gamma in gammas:
        depth = _acting_depth(gamma)
        for alpha in alphas:
            if alpha.length < depth:
                continue
            applicable += 1
            k = rn_exponent(gamma, alpha)
            histogram[k] = histogram.get(k, 0) + 1
    return {
        "applicable": applicable,
        "exponents": dict(sorted(histogram.items())),
        "all_even": all(k % 2 == 0 for k in histogram),
    }
