"""Exact weighted path counting for a fixed rational q in (0, 1).

An edge from mu (level N-1) up to lam (level N) carries the weight
q^(N*|mu| - (N-1)*|lam|); path weights multiply along edges, so they are
always integer powers of q.  The weighted analogue of the path count,
``qdim_between``, is computed by exact dynamic programming, and the
weighted count from the root has a closed product form, ``qdim``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import ContractViolationError, DomainError
from .gt_graph import (
    EMPTY,
    PathPrefix,
    Signature,
    has_path,
    predecessors,
)

__all__ = [
    "QContext",
    "QValue",
    "as_pure_power",
    "edge_weight",
    "edge_weight_exponent",
    "path_weight",
    "path_weight_exponent",
    "qdim",
    "qdim_between",
    "qnum",
    "weight_ratio_exponent",
]


@dataclass(frozen=True)
class QContext:
    """The deformation parameter q, a rational strictly between 0 and 1."""

    q: Fraction

    def __post_init__(self) -> None:
        q = self.q
        if not isinstance(q, Fraction):
            try:
                q = Fraction(q)
            except (TypeError, ValueError) as exc:
                raise DomainError(f"q must be rational, got {self.q!r}") from exc
            object.__setattr__(self, "q", q)
        if not Fraction(0) < q < Fraction(1):
            raise DomainError(f"q must lie strictly between 0 and 1, got {q}")

    def q_power(self, k: int) -> Fraction:
        """q**k as an exact rational; k may be negative."""
        return self.q ** k


@dataclass(frozen=True)
class QValue:
    """A nonnegative rational, tagged with its exponent when it is a power of q."""

    value: Fraction
    pure_power: Optional[int] = None

    def __post_init__(self) -> None:
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))
        if self.value < 0:
            raise ContractViolationError("weighted counts are never negative")


def as_pure_power(ctx: QContext, value: Fraction) -> Optional[int]:
    """The integer k with value == q**k, or None when there is no such k."""
    if value <= 0:
        return None
    if value == 1:
        return 0
    a, b = ctx.q.numerator, ctx.q.denominator
    p, r = value.numerator, value.denominator
    if value < 1:
        # candidate positive exponent from the denominator sizes
        guess = max(1, round(r.bit_length() / b.bit_length()))
    else:
        guess = -max(1, round(p.bit_length() / b.bit_length()))
    for k in range(guess - 2, guess + 3):
        if k > 0 and p == a ** k and r == b ** k:
            return k
        if k < 0 and p == b ** (-k) and r == a ** (-k):
            return k
    return None


def _tagged(ctx: QContext, value: Fraction) -> QValue:
    return QValue(value, as_pure_power(ctx, value))


def edge_weight_exponent(mu: Signature, lam: Signature) -> int:
    """Exponent k with edge weight q**k for the edge mu -> lam."""
    from .gt_graph import interlaces

    if not interlaces(mu, lam):
        raise ContractViolationError(
            f"edge weight needs an interlacing pair: {mu.entries} -> {lam.entries}"
        )
    n = lam.level
    return n * mu.size - (n - 1) * lam.size


def edge_weight(ctx: QContext, mu: Signature, lam: Signature) -> QValue:
    """The multiplicative weight of the edge from ``mu`` up to ``lam``."""
    k = edge_weight_exponent(mu, lam)
    return QValue(ctx.q_power(k), k)


def path_weight_exponent(alpha: PathPrefix) -> int:
    """Exponent of the product of edge weights along ``alpha``."""
    total = 0
    prev = alpha.start
    for step in alpha.steps:
        n = step.level
        total += n * prev.size - (n - 1) * step.size
        prev = step
    return total


def path_weight(ctx: QContext, alpha: PathPrefix) -> QValue:
    """Product of the edge weights along ``alpha`` (1 for an empty path)."""
    k = path_weight_exponent(alpha)
    return QValue(ctx.q_power(k), k)


def weight_ratio_exponent(alpha: PathPrefix, beta: PathPrefix) -> int:
    """The integer k with weight(beta)/weight(alpha) == q**k.

    Both paths must share their start and their endpoint; the exponent is
    then twice the difference of the intermediate-level entry sums, so it
    is always even.  Computed purely with integers.
    """
    if alpha.start != beta.start or alpha.endpoint != beta.endpoint:
        raise ContractViolationError("weight ratios need a shared start and endpoint")
    return path_weight_exponent(beta) - path_weight_exponent(alpha)


def qdim_between(ctx: QContext, mu: Signature, lam: Signature) -> QValue:
    """Sum of path weights from ``mu`` up to ``lam`` (0 when unreachable).

    Level-by-level dynamic programming over the signatures that are both
    below ``lam`` and reachable from ``mu``; no path enumeration.
    """
    if mu.level >= lam.level:
        raise ContractViolationError("qdim_between needs mu.level < lam.level")
    if not has_path(mu, lam):
        return QValue(Fraction(0))
    partial: dict[Signature, Fraction] = {lam: Fraction(1)}
    for level in range(lam.level - 1, mu.level - 1, -1):
        nxt: dict[Signature, Fraction] = {}
        for sig, val in partial.items():
            n = sig.level
            for pred in predecessors(sig):
                if level == mu.level:
                    if pred != mu:
                        continue
                elif not has_path(mu, pred):
                    continue
                w = ctx.q_power(n * pred.size - (n - 1) * sig.size)
                nxt[pred] = nxt.get(pred, Fraction(0)) + w * val
        partial = nxt
    return _tagged(ctx, partial.get(mu, Fraction(0)))


def qnum(ctx: QContext, n: int) -> Fraction:
    """The symmetric q-integer (q^-n - q^n)/(q^-1 - q); odd in n."""
    q = ctx.q
    return (q ** (-n) - q ** n) / (q ** (-1) - q)


def qdim(ctx: QContext, lam: Signature) -> QValue:
    """Sum of path weights from the root to ``lam``, in closed form.

    Equals prod_{i<j} [a_i - a_j] / [j - i] with a_i = lam_i - i and [] the
    symmetric q-integer; the tests verify agreement with ``qdim_between``
    from the root.  Invariant under adding a constant to all entries.
    """
    n = lam.level
    if n <= 1:
        return QValue(Fraction(1), 0)
    a = [lam.entries[i] - (i + 1) for i in range(n)]
    value = Fraction(1)
    for i in range(n):
        for j in range(i + 1, n):
            value *= qnum(ctx, a[i] - a[j]) / qnum(ctx, j - i)
    return _tagged(ctx, value)


def render_fraction(value: Fraction) -> str:
    """Serialize an exact rational as "p/r" (or a bare integer string)."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: str) -> Fraction:
    """Parse "p/r", integer, decimal, or scientific notation exactly."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        from .errors import ParseError

        raise ParseError(f"not a rational number: {text!r}") from exc


def render_float(value: Union[Fraction, int]) -> float:
    """Round an exact rational to the nearest binary double, scaling if huge."""
    value = Fraction(value)
    try:
        return value.numerator / value.denominator
    except OverflowError:
        sign = -1.0 if value < 0 else 1.0
        value = abs(value)
        shift = value.numerator.bit_length() - value.denominator.bit_length()
        scaled = value / Fraction(2) ** shift
        try:
            return sign * math.ldexp(scaled.numerator / scaled.denominator, shift)
        except OverflowError:
            return sign * math.inf
