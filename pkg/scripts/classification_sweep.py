#!/usr/bin/env python3
"""Sweep a grid of theta sequences and tabulate their classification.

For each bounded spec the atom mass is shown (exact); for each unbounded
spec the root-cylinder density certificate margin is shown instead.

Usage: python3 scripts/classification_sweep.py [--q 1/2]
"""

from __future__ import annotations

import argparse
from fractions import Fraction

from gt_ergodica import (
    AffineTail,
    ConstantTail,
    QContext,
    ThetaSpec,
    atom_mass,
    classify,
    format_theta,
    parse_path,
    ratio_certificate,
)


def sweep_specs() -> list[ThetaSpec]:
    specs: list[ThetaSpec] = []
    for a in (1, 2, 5):
        specs.append(ThetaSpec((), ConstantTail(a)))
    for prefix in ((0,), (0, 0), (1, 3)):
        specs.append(ThetaSpec(prefix, ConstantTail(max(prefix) + 1)))
    for start, step in ((1, 1), (0, 2), (4, 3)):
        specs.append(ThetaSpec((), AffineTail(start, step)))
    specs.append(ThetaSpec((0, 2), AffineTail(3, 1)))
    return specs


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--q", default="1/2", help="deformation parameter in (0,1)")
    args = parser.parse_args()
    ctx = QContext(Fraction(args.q))

    print(f"{'theta':<42} {'class':<8} evidence")
    print("-" * 96)
    for theta in sweep_specs():
        record = classify(theta)
        if theta.bounded:
            atom = atom_mass(theta, ctx)
            evidence = f"atom mass {atom.value} (depth {atom.depth})"
        else:
            cert = ratio_certificate(theta, ctx, parse_path(""))
            evidence = (
                f"certificate L={cert['L']} margin {float(cert['margin']):.4f} "
                f"rn exponents {cert['rn_exponents']} passes={cert['passes']}"
            )
        print(f"{format_theta(theta):<42} {record.kind:<8} {evidence}")


if __name__ == "__main__":
    main()
