"""Exact endpoint-relative weights at deep levels.

For a deep target signature Lambda at level m and a query signature nu at
level k < m, define

    R(nu) = (weighted path count nu -> Lambda) / (weighted path count root -> Lambda).

Cylinder masses, marginals, and transition laws all reduce to R.  Two
exact strategies are provided and cross-checked in the tests:

* a windowed dynamic program over the slice of the graph that can reach
  Lambda - cheap whenever the per-level state counts stay small (targets
  with few distinct entries, or small m);
* a determinant kernel: the weighted count nu -> Lambda is, after an
  entry shift making everything a partition, a skew Schur polynomial at a
  geometric specialization, evaluated through its Jacobi-Trudi
  determinant.  Replacing the k query-dependent columns inside the fixed
  minimal-endpoint matrix H0 turns every query into a k x k determinant:
  one exact factorization of H0 per (q, Lambda, k) serves all nu.

Both strategies return exact rationals; results are cached per
(q, Lambda, k).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional

from gmpy2 import mpq, mpz

from ._linalg import bareiss_det_and_solve, gauss_det_and_solve
from .errors import ContractViolationError
from .gt_graph import EMPTY, Signature, successor_count_within, successors_within
from .q_weights import QContext, qdim

__all__ = [
    "DeepKernel",
    "dp_relative_table",
    "gauss_binomial",
    "relative_weight_provider",
]

DEFAULT_DP_BUDGET = 60_000


def _qpow(q: mpq, e: int) -> mpq:
    if e >= 0:
        return q ** e
    return (1 / q) ** (-e)


def gauss_binomial(r: mpq, n: int, k: int) -> mpq:
    """The Gaussian binomial coefficient [n choose k]_r, exactly."""
    if k < 0 or k > n:
        return mpq(0)
    num = mpq(1)
    den = mpq(1)
    for i in range(1, k + 1):
        num *= 1 - _qpow(r, n - k + i)
        den *= 1 - _qpow(r, i)
    return num / den


class BudgetExceeded(Exception):
    """Internal: the windowed dynamic program would be too large."""


def _window_levels(target: Signature, k: int) -> list[list[tuple[int, int]]]:
    """Per-coordinate bounds for levels k..m-1 of paths reaching ``target``."""
    m = target.level
    e = target.entries
    out = []
    for level in range(k, m):
        gap = m - level
        out.append([(e[i + gap], e[i]) for i in range(level)])
    return out


def _window_signatures(bounds: list[tuple[int, int]], budget: int) -> list[Signature]:
    """All nonincreasing vectors within per-coordinate bounds, or raise."""
    results: list[tuple[int, ...]] = []

    def extend(prefix: tuple[int, ...], idx: int, cap: int) -> None:
        if idx == len(bounds):
            results.append(prefix)
            if len(results) > budget:
                raise BudgetExceeded
            return
        lo, hi = bounds[idx]
        hi = min(hi, cap)
        for v in range(lo, hi + 1):
            extend(prefix + (v,), idx + 1, v)

    extend((), 0, 2 ** 62)
    return [Signature(t) for t in results]


def dp_relative_table(
    ctx: QContext, target: Signature, k: int, budget: int = DEFAULT_DP_BUDGET
) -> dict[Signature, Fraction]:
    """R(nu) for every level-k signature that can reach ``target``.

    Backward level-by-level sweep over the reachability windows; raises
    BudgetExceeded when the total enumeration work (window states plus
    transition edges) passes ``budget``.
    """
    m = target.level
    if not 0 <= k < m:
        raise ContractViolationError("dp_relative_table needs 0 <= k < target level")
    if k == 0:
        return {EMPTY: Fraction(1)}
    q = mpq(ctx.q.numerator, ctx.q.denominator)
    level_bounds = _window_levels(target, k)
    frontiers: list[list[Signature]] = []
    remaining = budget
    for bounds in level_bounds:
        sigs = _window_signatures(bounds, remaining)
        remaining -= len(sigs)
        frontiers.append(sigs)
    values: dict[Signature, mpq] = {target: mpq(1)}
    for level in range(m - 1, k - 1, -1):
        bounds = level_bounds[level - k]
        lo = min(b[0] for b in bounds)
        hi = max(b[1] for b in bounds)
        nxt: dict[Signature, mpq] = {}
        for nu in frontiers[level - k]:
            n = level + 1
            remaining -= successor_count_within(nu, lo, hi)
            if remaining < 0:
                raise BudgetExceeded
            acc = mpq(0)
            for sigma in successors_within(nu, lo, hi):
                val = values.get(sigma)
                if val is None:
                    continue
                acc += _qpow(q, n * nu.size - (n - 1) * sigma.size) * val
            if acc:
                nxt[nu] = acc
        values = nxt
    dim_target = qdim(ctx, target).value
    denom = mpq(dim_target.numerator, dim_target.denominator)
    out: dict[Signature, Fraction] = {}
    for nu, val in values.items():
        ratio = val / denom
        out[nu] = Fraction(int(ratio.numerator), int(ratio.denominator))
    return out


class DeepKernel:
    """Column-replacement evaluator for R(nu) at a fixed (q, Lambda, k).

    Construction performs one exact elimination of the Jacobi-Trudi
    matrix of the minimal level-k endpoint; afterwards each query costs a
    k x k determinant over cached column projections.
    """

    def __init__(
        self,
        ctx: QContext,
        target: Signature,
        k: int,
        solver: Callable = gauss_det_and_solve,
    ) -> None:
        m = target.level
        if not 1 <= k < m:
            raise ContractViolationError("DeepKernel needs 1 <= k < target level")
        self.ctx = ctx
        self.target = target
        self.k = k
        self.m = m
        self.shift = max(0, -target.entries[-1])
        lam = [e + self.shift for e in target.entries]
        self.q = mpq(ctx.q.numerator, ctx.q.denominator)
        self.r = _qpow(self.q, -2)
        p = m - k
        self.p = p
        self.s_exp = m - 1 - 2 * k
        self.ell = [lam[i] + m - (i + 1) for i in range(m)]
        self.t_floor = [lam[j - 1 + p] + m - j for j in range(1, k + 1)]
        self._h_cache: dict[int, mpq] = {}
        self._u_cache: dict[int, tuple[mpq, ...]] = {}

        virtual = [m - j for j in range(k + 1, m + 1)]
        columns = self.t_floor + virtual
        h0_t = [
            [self._fraction(self._h(self.ell[i] - t)) for i in range(m)]
            for t in columns
        ]
        rhs = []
        for j in range(k):
            e_j = [Fraction(0)] * m
            e_j[j] = Fraction(1)
            rhs.append(e_j)
        det, solves = solver(h0_t, rhs)
        if det == 0:
            raise ContractViolationError("minimal endpoint matrix is singular")
        self._rows = [
            [mpq(x.numerator, x.denominator) for x in sol] for sol in solves
        ]
        dim_target = qdim(ctx, target).value
        self._factor = mpq(det.numerator, det.denominator) / mpq(
            dim_target.numerator, dim_target.denominator
        )
        self._min_fill = sum(lam[j + p] for j in range(k))
        for j in range(k):
            u = self._u(self.t_floor[j])
            expected = tuple(mpq(1) if i == j else mpq(0) for i in range(k))
            if u != expected:
                raise ContractViolationError(
                    "kernel self-check failed: minimal endpoint did not reproduce "
                    "a unit column"
                )

    @staticmethod
    def _fraction(x: mpq) -> Fraction:
        return Fraction(int(x.numerator), int(x.denominator))

    def _h(self, d: int) -> mpq:
        """Complete homogeneous sum of degree d in the geometric alphabet."""
        if d < 0:
            return mpq(0)
        got = self._h_cache.get(d)
        if got is None:
            got = _qpow(self.q, self.s_exp * d) * gauss_binomial(
                self.r, self.p - 1 + d, d
            )
            self._h_cache[d] = got
        return got

    def _u(self, t: int) -> tuple[mpq, ...]:
        """Projections of the shifted-index column onto the k tracked rows."""
        got = self._u_cache.get(t)
        if got is None:
            col = [self._h(self.ell[i] - t) for i in range(self.m)]
            got = tuple(
                sum((w[i] * col[i] for i in range(self.m)), mpq(0))
                for w in self._rows
            )
            self._u_cache[t] = got
        return got

    def _feasible(self, nu: Signature) -> bool:
        gap = self.m - self.k
        e = self.target.entries
        return all(e[i + gap] <= v <= e[i] for i, v in enumerate(nu.entries))

    def relative_weight(self, nu: Signature) -> Fraction:
        """R(nu), exactly; zero when nu cannot reach the target."""
        if nu.level != self.k:
            raise ContractViolationError(f"kernel is for level {self.k}")
        if not self._feasible(nu):
            return Fraction(0)
        k = self.k
        shifted = [nu.entries[j] + self.shift for j in range(k)]
        cols = [self._u(shifted[j] + self.m - (j + 1)) for j in range(k)]
        det = _small_det([[cols[j][i] for j in range(k)] for i in range(k)])
        fill = sum(shifted)
        value = _qpow(self.q, (self.m - k) * fill) * self._factor * det
        return self._fraction(value)


def _small_det(rows: list[list[mpq]]) -> mpq:
    """Determinant of a small dense mpq matrix (fractional elimination)."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    a = [row[:] for row in rows]
    det = mpq(1)
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot_row is None:
            return mpq(0)
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            det = -det
        pivot = a[col][col]
        det *= pivot
        for r in range(col + 1, n):
            factor = a[r][col] / pivot
            if factor == 0:
                continue
            for c in range(col, n):
                a[r][c] -= factor * a[col][c]
    return det


_TABLE_CACHE: dict = {}
_KERNEL_CACHE: dict = {}


def relative_weight_provider(
    ctx: QContext,
    target: Signature,
    k: int,
    dp_budget: int = DEFAULT_DP_BUDGET,
) -> Callable[[Signature], Fraction]:
    """A function nu -> R(nu) for level-k queries against ``target``.

    Uses the windowed dynamic program when its state count fits the
    budget and the determinant kernel otherwise; results are cached per
    (q, target, k) for the lifetime of the process.
    """
    if k == 0:
        return lambda nu: Fraction(1)
    key = (ctx.q, target.entries, k)
    table = _TABLE_CACHE.get(key)
    if table is not None:
        return lambda nu: table.get(nu, Fraction(0))
    kernel = _KERNEL_CACHE.get(key)
    if kernel is None:
        try:
            table = dp_relative_table(ctx, target, k, dp_budget)
        except BudgetExceeded:
            kernel = DeepKernel(ctx, target, k)
            _KERNEL_CACHE[key] = kernel
        else:
            _TABLE_CACHE[key] = table
            return lambda nu: table.get(nu, Fraction(0))
    return kernel.relative_weight
