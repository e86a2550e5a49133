#!/usr/bin/env python3
"""Tabulate finite-depth cylinder masses as the working depth grows.

The mass of a cylinder under an unbounded theta measure is a limit of
finite-depth evaluations; this prints the exact value at each depth so
the stabilization is visible.  Bounded theta stabilize exactly.

Usage: python3 scripts/mass_convergence.py [--theta SPEC] [--path PATH]
       [--max-depth 14] [--q 1/2]
"""

from __future__ import annotations

import argparse
from fractions import Fraction

from gt_ergodica import QContext, cylinder_mass, parse_path, parse_theta

PIN_EPS = Fraction(1, 10**40)  # far below reach, so depth_cap binds


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--theta", default="prefix=;tail=affine:start=1,step=1")
    parser.add_argument("--path", default="1", help='cylinder path, e.g. "1;2,1"')
    parser.add_argument("--max-depth", type=int, default=14)
    parser.add_argument("--q", default="1/2")
    args = parser.parse_args()

    theta = parse_theta(args.theta)
    ctx = QContext(Fraction(args.q))
    path = parse_path(args.path)

    print(f"theta = {args.theta}   path = {args.path!r}   q = {ctx.q}")
    print(f"{'depth':>5} {'mass (float)':>18} {'last rel. change':>18}")
    previous = None
    for depth in range(max(2, len(path.steps) + 1), args.max_depth + 1):
        approx = cylinder_mass(theta, ctx, path, eps=PIN_EPS, depth_cap=depth)
        change = (
            ""
            if previous is None or previous == 0
            else f"{float(abs(approx.value - previous) / previous):.3e}"
        )
        print(f"{approx.depth:>5} {float(approx.value):>18.12f} {change:>18}")
        previous = approx.value
    converged = cylinder_mass(theta, ctx, path)
    exact = str(converged.value)
    if len(exact) > 60:
        exact = f"an exact rational with {len(exact)} digits"
    print(
        f"eps=1e-9 stopping depth: {converged.depth}, "
        f"mass = {exact} ≈ {float(converged.value):.12f}"
    )


if __name__ == "__main__":
    main()
