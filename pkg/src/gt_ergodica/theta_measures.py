"""Central probability measures on the infinite path space.

A nondecreasing integer sequence theta (a finite prefix followed by
either a constant or an affine tail) pins a distinguished endpoint
lambda(n) = (theta_n, ..., theta_1) at every level n.  The measure
attached to theta gives the cylinder over a finite path alpha the mass

    mass(C_alpha) = weight(alpha) * lim_n R_n(endpoint of alpha),

where R_n is the endpoint-relative weight against lambda(n).  All
finite-depth quantities are exact rationals; the limit is approached
through a doubling depth schedule with a three-in-a-row stopping rule.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from ._deep_eval import relative_weight_provider
from .errors import ContractViolationError, DomainError, ParseError
from .gt_graph import (
    EMPTY,
    PathPrefix,
    Signature,
    successors_within,
    weyl_dim,
)
from .q_weights import (
    QContext,
    edge_weight_exponent,
    path_weight_exponent,
    qdim,
    qdim_between,
)

__all__ = [
    "AffineTail",
    "ClassificationRecord",
    "ConstantTail",
    "DEFAULT_DEPTH_CAP",
    "DEFAULT_EPS",
    "MeasureApprox",
    "ThetaSpec",
    "atom_mass",
    "classify",
    "conditional_transition",
    "cylinder_mass",
    "dim_growth_evidence",
    "distinguished_path",
    "format_theta",
    "lambda_of",
    "level_marginal",
    "parse_theta",
    "q_centrality_check",
    "sample_path",
    "support_at_level",
    "theta_value",
]

DEFAULT_EPS = Fraction(1, 10 ** 9)
DEFAULT_DEPTH_CAP = 64


@dataclass(frozen=True)
class ConstantTail:
    """theta_n == a for every n past the prefix."""

    a: int


@dataclass(frozen=True)
class AffineTail:
    """theta_n walks start, start+step, start+2*step, ... past the prefix."""

    start: int
    step: int

    def __post_init__(self) -> None:
        if self.step < 1:
            raise DomainError("affine tails need step >= 1")


@dataclass(frozen=True)
class ThetaSpec:
    """A nondecreasing integer parameter sequence with an eventual pattern."""

    prefix: tuple[int, ...]
    tail: Union[ConstantTail, AffineTail]

    def __post_init__(self) -> None:
        if not isinstance(self.prefix, tuple):
            object.__setattr__(self, "prefix", tuple(self.prefix))
        if any(a > b for a, b in zip(self.prefix, self.prefix[1:])):
            raise DomainError(f"theta prefix must be nondecreasing: {self.prefix}")
        first_tail = (
            self.tail.a if isinstance(self.tail, ConstantTail) else self.tail.start
        )
        if self.prefix and first_tail < self.prefix[-1]:
            raise DomainError("theta tail must continue nondecreasingly from the prefix")

    @property
    def bounded(self) -> bool:
        return isinstance(self.tail, ConstantTail)

    @property
    def constant(self) -> bool:
        return self.bounded and all(x == self.tail.a for x in self.prefix)


def theta_value(theta: ThetaSpec, i: int) -> int:
    """theta_i with 1-based indexing."""
    if i < 1:
        raise DomainError(f"theta indices start at 1, got {i}")
    if i <= len(theta.prefix):
        return theta.prefix[i - 1]
    j = i - len(theta.prefix)
    if isinstance(theta.tail, ConstantTail):
        return theta.tail.a
    return theta.tail.start + (j - 1) * theta.tail.step


def lambda_of(theta: ThetaSpec, n: int) -> Signature:
    """The distinguished level-n signature (theta_n, ..., theta_1)."""
    if n < 0:
        raise DomainError(f"levels are nonnegative, got {n}")
    return Signature(tuple(theta_value(theta, i) for i in range(n, 0, -1)))


def distinguished_path(theta: ThetaSpec, n: int) -> PathPrefix:
    """The path from the root through lambda(1), ..., lambda(n)."""
    return PathPrefix(EMPTY, tuple(lambda_of(theta, i) for i in range(1, n + 1)))


def format_theta(theta: ThetaSpec) -> str:
    prefix = ",".join(str(x) for x in theta.prefix)
    if isinstance(theta.tail, ConstantTail):
        tail = f"const:{theta.tail.a}"
    else:
        tail = f"affine:start={theta.tail.start},step={theta.tail.step}"
    return f"prefix={prefix};tail={tail}"


def parse_theta(text: str) -> ThetaSpec:
    """Parse "prefix=0,1;tail=const:1" / "prefix=;tail=affine:start=1,step=1"."""
    text = text.strip()
    try:
        prefix_part, tail_part = (piece.strip() for piece in text.split(";", 1))
        if not prefix_part.startswith("prefix=") or not tail_part.startswith("tail="):
            raise ValueError
        prefix_body = prefix_part[len("prefix="):].strip()
        prefix = (
            tuple(int(x.strip()) for x in prefix_body.split(",")) if prefix_body else ()
        )
        tail_body = tail_part[len("tail="):].strip()
        kind, _, args = tail_body.partition(":")
        if kind == "const":
            tail: Union[ConstantTail, AffineTail] = ConstantTail(int(args.strip()))
        elif kind == "affine":
            fields = dict(
                (piece.split("=", 1)[0].strip(), int(piece.split("=", 1)[1]))
                for piece in args.split(",")
            )
            tail = AffineTail(fields["start"], fields["step"])
        else:
            raise ValueError
    except (ValueError, KeyError, IndexError, DomainError) as exc:
        raise ParseError(f"not a theta description: {text!r}") from exc
    try:
        return ThetaSpec(prefix, tail)
    except DomainError as exc:
        raise ParseError(str(exc)) from exc


@dataclass(frozen=True)
class MeasureApprox:
    """An exact finite-depth evaluation of a limiting quantity.

    ``value`` is the exact rational at working depth ``depth``;
    ``eps_achieved`` is the relative change observed at the last depth
    refinement (1 when only a single depth was evaluated).
    """

    theta: ThetaSpec
    ctx: QContext
    depth: int
    eps_achieved: Fraction
    value: Fraction


def _relative_change(prev: Fraction, new: Fraction) -> Fraction:
    diff = abs(new - prev)
    if new != 0:
        return diff / abs(new)
    if prev != 0:
        return diff / abs(prev)
    return Fraction(0)


def _depth_schedule(start: int, cap: int) -> list[int]:
    depths = []
    d = start
    while d < cap:
        depths.append(d)
        d *= 2
    depths.append(cap)
    return depths


def _converge(value_at, start: int, cap: int, eps: Fraction):
    prev: Optional[Fraction] = None
    last_change = Fraction(1)
    streak = 0
    value = Fraction(0)
    depth = cap
    for depth in _depth_schedule(start, cap):
        value = value_at(depth)
        if prev is not None:
            last_change = _relative_change(prev, value)
            streak = streak + 1 if last_change < eps else 0
            if streak >= 3:
                return value, depth, last_change
        prev = value
    return value, depth, last_change


def _relative(theta: ThetaSpec, ctx: QContext, depth: int, nu: Signature) -> Fraction:
    provider = relative_weight_provider(ctx, lambda_of(theta, depth), nu.level)
    return provider(nu)


def _require_from_root(alpha: PathPrefix) -> None:
    if alpha.start != EMPTY:
        raise DomainError("cylinders are indexed by paths from the root")


def cylinder_mass(
    theta: ThetaSpec,
    ctx: QContext,
    alpha: PathPrefix,
    eps: Fraction = DEFAULT_EPS,
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> MeasureApprox:
    """Mass of the cylinder over ``alpha`` under the theta measure.

    Exact value weight(alpha) * R_m(endpoint) at the stopping depth m of
    the doubling schedule; exact zero when the endpoint cannot reach the
    depth-m distinguished signature.
    """
    _require_from_root(alpha)
    lam = alpha.endpoint
    if depth_cap < lam.level + 1:
        raise DomainError("depth cap must exceed the cylinder level")
    w = ctx.q_power(path_weight_exponent(alpha))

    def value_at(m: int) -> Fraction:
        return w * _relative(theta, ctx, m, lam)

    value, depth, achieved = _converge(value_at, lam.level + 1, depth_cap, eps)
    return MeasureApprox(theta, ctx, depth, achieved, value)


def level_marginal(
    theta: ThetaSpec,
    ctx: QContext,
    lam: Signature,
    eps: Fraction = DEFAULT_EPS,
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> MeasureApprox:
    """Total mass of all cylinders with endpoint ``lam`` (= qdim * R)."""
    if depth_cap < lam.level + 1:
        raise DomainError("depth cap must exceed the marginal level")
    d = qdim(ctx, lam).value

    def value_at(m: int) -> Fraction:
        return d * _relative(theta, ctx, m, lam)

    value, depth, achieved = _converge(value_at, lam.level + 1, depth_cap, eps)
    return MeasureApprox(theta, ctx, depth, achieved, value)


def support_at_level(theta: ThetaSpec, k: int, probe_depth: int) -> list[Signature]:
    """Level-k signatures that can reach the depth-``probe_depth`` endpoint.

    Positive membership is conclusive for the limiting measure; the
    complement is only "not reachable at this probe depth".  Sorted
    lexicographically decreasing, so the distinguished signature with the
    largest entries comes first.
    """
    if k < 0 or probe_depth <= k:
        raise DomainError("support probe needs 0 <= k < probe_depth")
    if k == 0:
        return [EMPTY]
    target = lambda_of(theta, probe_depth)
    gap = probe_depth - k
    e = target.entries
    bounds = [(e[i + gap], e[i]) for i in range(k)]
    results: list[tuple[int, ...]] = []

    def extend(prefix: tuple[int, ...], idx: int, cap: int) -> None:
        if idx == k:
            results.append(prefix)
            return
        lo, hi = bounds[idx]
        for v in range(lo, min(hi, cap) + 1):
            extend(prefix + (v,), idx + 1, v)

    extend((), 0, 2 ** 62)
    results.sort(reverse=True)
    return [Signature(t) for t in results]


def conditional_transition(
    theta: ThetaSpec,
    ctx: QContext,
    alpha: PathPrefix,
    eps: Fraction = DEFAULT_EPS,
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> list[tuple[Signature, Fraction]]:
    """The exact one-step law out of ``alpha`` given its cylinder.

    Evaluated at the stopping depth of the parent mass; at any fixed
    depth the finite-depth measure is exactly consistent, so the returned
    probabilities sum to one exactly.
    """
    _require_from_root(alpha)
    parent = cylinder_mass(theta, ctx, alpha, eps, depth_cap)
    if parent.value == 0:
        raise DomainError("conditional law of a zero-mass cylinder")
    m = parent.depth
    lam = alpha.endpoint
    n = lam.level
    r_parent = parent.value / ctx.q_power(path_weight_exponent(alpha))
    target = lambda_of(theta, m)
    lo, hi = min(target.entries), max(target.entries)
    pairs: list[tuple[Signature, Fraction]] = []
    gap = m - (n + 1)
    for sigma in successors_within(lam, lo, hi):
        if gap == 0:
            if sigma != target:
                continue
            r_sigma = Fraction(1)
        else:
            if not all(
                target.entries[i + gap] <= v <= target.entries[i]
                for i, v in enumerate(sigma.entries)
            ):
                continue
            r_sigma = _relative(theta, ctx, m, sigma)
            if r_sigma == 0:
                continue
        w = ctx.q_power(edge_weight_exponent(lam, sigma))
        pairs.append((sigma, w * r_sigma / r_parent))
    total = sum(p for _, p in pairs)
    if total != 1:
        raise ContractViolationError(
            f"conditional law failed exact normalization: sum {total}"
        )
    return pairs


def sample_path(
    theta: ThetaSpec,
    ctx: QContext,
    depth: int,
    seed: int,
    eps: Fraction = DEFAULT_EPS,
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> PathPrefix:
    """Draw one path from the root to ``depth`` under the theta measure.

    Deterministic in ``seed``; transition laws are exact rationals and
    the uniform draws are compared to them exactly.
    """
    rng = random.Random(seed)
    path = PathPrefix(EMPTY, ())
    for _ in range(depth):
        pairs = _transition_cached(theta, ctx, path, eps, depth_cap)
        u = Fraction(rng.random())
        acc = Fraction(0)
        chosen = pairs[-1][0]
        for sigma, prob in pairs:
            acc += prob
            if u < acc:
                chosen = sigma
                break
        path = path.extended(chosen)
    return path


_TRANSITION_CACHE: dict = {}


def _transition_cached(theta, ctx, path, eps, depth_cap):
    key = (theta, ctx.q, tuple(s.entries for s in path.steps), eps, depth_cap)
    got = _TRANSITION_CACHE.get(key)
    if got is None:
        got = conditional_transition(theta, ctx, path, eps, depth_cap)
        _TRANSITION_CACHE[key] = got
    return got


def q_centrality_check(
    theta: ThetaSpec,
    ctx: QContext,
    level: int,
    eps: Fraction = DEFAULT_EPS,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    working_depth: Optional[int] = None,
    dual_route_dim_cap: int = 200,
    consistency_sample_cap: int = 1000,
) -> dict:
    """Verify that the theta measure is exactly coherent at one level.

    Everything is evaluated at a single working depth m (default
    min(depth_cap, max(16, 2*level + 8))), where the finite-depth measure
    is an exact probability:

    * normalization: the marginals over the full reachable level sum to
      one exactly (every endpoint enters the sum);
    * consistency: the relative weight of an endpoint equals the
      edge-weighted sum of the relative weights one level up, with the
      two levels served by independently constructed evaluators — on all
      endpoints, or a deterministic stride sample of
      ``consistency_sample_cap`` when the support is larger;
    * dual dimension route: on sampled endpoints with at most
      ``dual_route_dim_cap`` paths, the product-formula dimension is
      checked against the weighted path-sum dimension.
    """
    if level < 1:
        raise DomainError("q-centrality checks need level >= 1")
    m = working_depth or min(depth_cap, max(16, 2 * level + 8))
    if m <= level + 1:
        raise DomainError("working depth must exceed the checked level by two")
    target = lambda_of(theta, m)
    provider_level = relative_weight_provider(ctx, target, level)
    provider_next = relative_weight_provider(ctx, target, level + 1)
    support = support_at_level(theta, level, m)
    stride = -(-len(support) // consistency_sample_cap)
    sampled = frozenset(range(0, len(support), stride))
    gap_next = m - (level + 1)
    worst = Fraction(0)
    checked = 0
    marginal_sum = Fraction(0)
    endpoints = []
    for idx, lam in enumerate(support):
        r = provider_level(lam)
        dim_formula = qdim(ctx, lam).value
        marginal = dim_formula * r
        marginal_sum += marginal
        if idx in sampled:
            checked += 1
            lo, hi = target.entries[-1], target.entries[0]
            upward = Fraction(0)
            for sigma in successors_within(lam, lo, hi):
                if not all(
                    target.entries[i + gap_next] <= v <= target.entries[i]
                    for i, v in enumerate(sigma.entries)
                ):
                    continue
                r_sigma = provider_next(sigma)
                if r_sigma == 0:
                    continue
                upward += ctx.q_power(edge_weight_exponent(lam, sigma)) * r_sigma
            worst = max(worst, _relative_change(upward, r))
            if weyl_dim(lam) <= dual_route_dim_cap:
                dim_pathsum = qdim_between(ctx, EMPTY, lam).value
                worst = max(worst, _relative_change(dim_pathsum * r, marginal))
        endpoints.append(
            {
                "endpoint": lam,
                "marginal": marginal,
                "paths": weyl_dim(lam),
            }
        )
    return {
        "level": level,
        "working_depth": m,
        "support_size": len(support),
        "consistency_checked": checked,
        "worst_ratio_deviation": worst,
        "marginal_sum": marginal_sum,
        "normalization_exact": marginal_sum == 1,
        "endpoints": endpoints,
        "pass": worst < eps and marginal_sum == 1,
    }


def atom_mass(
    theta: ThetaSpec,
    ctx: QContext,
    eps: Fraction = DEFAULT_EPS,
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> MeasureApprox:
    """Mass of the distinguished path cylinder at the stabilization level.

    Only bounded theta have one: past the level where theta becomes
    constant, the conditional law out of the distinguished path collapses
    onto a single continuation, so the cylinder masses stabilize.
    """
    if not theta.bounded:
        raise DomainError("unbounded theta carry no distinguished atom")
    a = theta.tail.a
    idx = len(theta.prefix)
    while idx > 0 and theta.prefix[idx - 1] == a:
        idx -= 1
    n = idx + 1 if idx > 0 else 1
    return cylinder_mass(theta, ctx, distinguished_path(theta, n), eps, depth_cap)


@dataclass(frozen=True)
class ClassificationRecord:
    theta: ThetaSpec
    kind: str
    bounded: bool
    constant: bool
    reason: str


def classify(theta: ThetaSpec) -> ClassificationRecord:
    """Sort a theta sequence into the three ergodic-type regimes.

    Constant sequences give a point mass (type I_1); bounded non-constant
    ones give an atomic-but-diffuse-looking I_infinity regime (the
    distinguished atom persists while level dimensions grow without
    bound); strictly increasing affine tails give the q^2-ratio regime
    III_q2 with no invariant reference measure.
    """
    if theta.constant:
        return ClassificationRecord(
            theta,
            "I_1",
            True,
            True,
            "constant sequence: the distinguished path carries all the mass",
        )
    if theta.bounded:
        return ClassificationRecord(
            theta,
            "I_inf",
            True,
            False,
            "bounded non-constant: a positive atom coexists with unbounded "
            "level dimensions",
        )
    return ClassificationRecord(
        theta,
        "III_q2",
        False,
        False,
        "unbounded affine tail: tail permutations realize the ratio q^2 on "
        "a uniformly heavy part of every cylinder",
    )


def dim_growth_evidence(theta: ThetaSpec, n_max: int) -> list[int]:
    """weyl_dim(lambda(n)) for n = 1..n_max; bounded non-constant theta only."""
    if not theta.bounded or theta.constant:
        raise DomainError("dimension growth evidence needs bounded non-constant theta")
    return [weyl_dim(lambda_of(theta, n)) for n in range(1, n_max + 1)]
