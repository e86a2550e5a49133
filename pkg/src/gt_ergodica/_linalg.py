"""Exact dense linear algebra over the rationals, built on gmpy2.

Two interchangeable eliminations produce a determinant together with
solutions of A x = b for a block of right-hand sides:

* ``gauss_det_and_solve`` - straight fractional Gaussian elimination in
  gmpy2.mpq.
* ``bareiss_det_and_solve`` - fraction-free Bareiss elimination after
  clearing row denominators; all intermediates are integers (gmpy2.mpz),
  which keeps coefficient growth at single-minor size.

Both use partial pivoting by first nonzero entry and raise
ContractViolationError on a singular matrix.  Inputs and outputs are
Fractions; gmpy2 is an internal representation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import gmpy2
from gmpy2 import mpq, mpz

from .errors import ContractViolationError

__all__ = ["bareiss_det_and_solve", "gauss_det_and_solve"]


def _to_mpq_matrix(rows: Sequence[Sequence[Fraction]]) -> list[list[mpq]]:
    return [[mpq(x.numerator, x.denominator) for x in row] for row in rows]


def _from_mpq(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def gauss_det_and_solve(
    matrix: Sequence[Sequence[Fraction]], rhs_columns: Sequence[Sequence[Fraction]]
) -> tuple[Fraction, list[list[Fraction]]]:
    """Determinant of ``matrix`` and solutions of matrix @ x = b per rhs column."""
    n = len(matrix)
    k = len(rhs_columns)
    a = _to_mpq_matrix(matrix)
    for i, row in enumerate(a):
        if len(row) != n:
            raise ContractViolationError("matrix must be square")
        row.extend(mpq(b[i].numerator, b[i].denominator) for b in rhs_columns)
    sign = 1
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot_row is None:
            raise ContractViolationError("singular matrix")
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            sign = -sign
        pivot = a[col][col]
        for r in range(col + 1, n):
            factor = a[r][col]
            if factor == 0:
                continue
            factor = factor / pivot
            row_r = a[r]
            row_c = a[col]
            for c in range(col, n + k):
                row_r[c] -= factor * row_c[c]
    det = mpq(sign)
    for i in range(n):
        det *= a[i][i]
    solutions = []
    for j in range(k):
        x = [mpq(0)] * n
        for i in range(n - 1, -1, -1):
            acc = a[i][n + j]
            row = a[i]
            for c in range(i + 1, n):
                acc -= row[c] * x[c]
            x[i] = acc / row[i]
        solutions.append([_from_mpq(v) for v in x])
    return _from_mpq(det), solutions


def bareiss_det_and_solve(
    matrix: Sequence[Sequence[Fraction]], rhs_columns: Sequence[Sequence[Fraction]]
) -> tuple[Fraction, list[list[Fraction]]]:
    """Same contract as :func:`gauss_det_and_solve`, fraction-free internally."""
    n = len(matrix)
    k = len(rhs_columns)
    a: list[list[mpz]] = []
    row_scale: list[mpz] = []
    for i, row in enumerate(matrix):
        if len(row) != n:
            raise ContractViolationError("matrix must be square")
        full = list(row) + [rhs_columns[j][i] for j in range(k)]
        denom = mpz(1)
        for x in full:
            denom = gmpy2.lcm(denom, mpz(x.denominator))
        a.append([mpz(x.numerator) * (denom // mpz(x.denominator)) for x in full])
        row_scale.append(denom)
    sign = 1
    prev_pivot = mpz(1)
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot_row is None:
            raise ContractViolationError("singular matrix")
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            sign = -sign
        pivot = a[col][col]
        for r in range(col + 1, n):
            row_r = a[r]
            row_c = a[col]
            lead = row_r[col]
            for c in range(col, n + k):
                row_r[c] = (pivot * row_r[c] - lead * row_c[c]) // prev_pivot
        prev_pivot = pivot
    det_int = a[n - 1][n - 1]
    scale = mpz(1)
    for d in row_scale:
        scale *= d
    det = mpq(sign * det_int, scale)
    solutions = []
    for j in range(k):
        x = [mpq(0)] * n
        for i in range(n - 1, -1, -1):
            acc = mpq(a[i][n + j])
            row = a[i]
            for c in range(i + 1, n):
                acc -= row[c] * x[c]
            x[i] = acc / row[i]
        solutions.append([_from_mpq(v) for v in x])
    return _from_mpq(det), solutions
