"""Command-line front end emitting versioned JSON (or CSV) reports.

Exit codes: 0 on success, 2 for malformed input, 3 for domain errors
(valid input outside an operation's domain).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DomainError, ParseError
from .gt_graph import (
    EMPTY,
    count_paths,
    format_path,
    format_signature,
    parse_path,
    parse_signature,
    weyl_dim,
)
from .q_weights import QContext, qdim
from .ratio_set import (
    RectYoungDiagram,
    chain_partition_young,
    ratio_certificate,
)
from .theta_measures import (
    DEFAULT_DEPTH_CAP,
    DEFAULT_EPS,
    atom_mass,
    classify,
    cylinder_mass,
    dim_growth_evidence,
    parse_theta,
    q_centrality_check,
    sample_path,
)

SCHEMA = "gt-ergodica/1"


@dataclass(frozen=True)
class RunConfig:
    """Shared run parameters; every command accepts the same set."""

    q: Fraction = Fraction(1, 2)
    eps: Fraction = DEFAULT_EPS
    depth_cap: int = DEFAULT_DEPTH_CAP
    seed: int = 0
    output: str = "-"
    format: Optional[str] = None

    def __post_init__(self) -> None:
        if not Fraction(0) < self.q < Fraction(1):
            raise ParseError(f"q must lie strictly between 0 and 1, got {self.q}")
        if self.eps <= 0:
            raise ParseError(f"eps must be positive, got {self.eps}")
        if self.depth_cap < 2:
            raise ParseError(f"depth cap must be at least 2, got {self.depth_cap}")

    @property
    def ctx(self) -> QContext:
        return QContext(self.q)


def _parse_fraction(text: str) -> Fraction:
    """Accept "p/r" rationals and decimal/scientific floats."""
    text = text.strip()
    try:
        if "/" in text:
            return Fraction(text)
        if any(c in text for c in ".eE"):
            return Fraction(text) if "." in text and "e" not in text.lower() else Fraction(float(text))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise ParseError(f"not a rational: {text!r}") from exc


def _num(value: Fraction) -> dict:
    """Exact rational plus a 15-significant-digit float rendering."""
    return {"exact": str(value), "float": float(f"{float(value):.15g}")}


def _config_from(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        q=_parse_fraction(args.q),
        eps=_parse_fraction(args.eps),
        depth_cap=args.depth_cap,
        seed=args.seed,
        output=args.output,
        format=args.format,
    )


def _cmd_dims(args: argparse.Namespace, config: RunConfig) -> dict:
    sig = parse_signature(args.sig)
    if sig == EMPTY:
        raise DomainError("dims needs a signature with at least one entry")
    dim = weyl_dim(sig)
    paths = count_paths(EMPTY, sig)
    return {
        "command": "dims",
        "sig": format_signature(sig),
        "q": _num(config.q),
        "weyl_dim": dim,
        "path_count": paths,
        "qdim": _num(qdim(config.ctx, sig).value),
    }


def _cmd_classify(args: argparse.Namespace, config: RunConfig) -> dict:
    theta = parse_theta(args.theta)
    record = classify(theta)
    report = {
        "command": "classify",
        "theta": args.theta.strip(),
        "type": record.kind,
        "bounded": record.bounded,
        "constant": record.constant,
        "reason": record.reason,
    }
    if args.evidence:
        if theta.bounded:
            atom = atom_mass(theta, config.ctx, config.eps, config.depth_cap)
            evidence: dict = {
                "atom_mass": _num(atom.value),
                "depth": atom.depth,
                "eps_achieved": _num(atom.eps_achieved),
            }
            if not theta.constant:
                evidence["weyl_dims"] = dim_growth_evidence(theta, 12)
        else:
            cert = ratio_certificate(
                theta,
                config.ctx,
                parse_path(""),
                eps=config.eps,
                depth_cap=config.depth_cap,
            )
            evidence = {
                "certificate": {
                    "L": cert["L"],
                    "working_depth": cert["working_depth"],
                    "mass_alpha": _num(cert["mass_alpha"]),
                    "mass_advancing": _num(cert["mass_advancing"]),
                    "margin": _num(cert["margin"]),
                    "coverage": _num(cert["coverage"]),
                    "rn_exponents": cert["rn_exponents"],
                    "chains": cert["chains"],
                    "segments": cert["segments"],
                    "unchained": cert["unchained"],
                    "passes": cert["passes"],
                }
            }
        report["evidence"] = evidence
    return report


def _cmd_measure(args: argparse.Namespace, config: RunConfig) -> dict:
    theta = parse_theta(args.theta)
    path = parse_path(args.path)
    approx = cylinder_mass(theta, config.ctx, path, config.eps, config.depth_cap)
    report = {
        "command": "measure",
        "theta": args.theta.strip(),
        "path": format_path(path),
        "mass": _num(approx.value),
        "working_depth": approx.depth,
        "eps_achieved": _num(approx.eps_achieved),
    }
    if args.check:
        level = max(1, len(path.steps))
        check = q_centrality_check(
            theta, config.ctx, level, config.eps, config.depth_cap
        )
        report["q_centrality"] = {
            "level": check["level"],
            "working_depth": check["working_depth"],
            "support_size": check["support_size"],
            "consistency_checked": check["consistency_checked"],
            "worst_ratio_deviation": _num(check["worst_ratio_deviation"]),
            "marginal_sum": _num(check["marginal_sum"]),
            "normalization_exact": check["normalization_exact"],
            "pass": check["pass"],
        }
    return report


def _cmd_ratio_set(args: argparse.Namespace, config: RunConfig) -> dict:
    theta = parse_theta(args.theta)
    alpha = parse_path(args.alpha)
    cert = ratio_certificate(
        theta,
        config.ctx,
        alpha,
        L=args.level,
        eps=config.eps,
        depth_cap=config.depth_cap,
    )
    partition = cert["partition"]
    return {
        "command": "ratio-set",
        "theta": args.theta.strip(),
        "alpha": format_path(alpha),
        "L": cert["L"],
        "working_depth": cert["working_depth"],
        "beta": _num(cert["beta"]),
        "mass_alpha": _num(cert["mass_alpha"]),
        "mass_advancing": _num(cert["mass_advancing"]),
        "margin": _num(cert["margin"]),
        "mass_unchained": _num(cert["mass_unchained"]),
        "coverage": _num(cert["coverage"]),
        "window_endpoints": cert["window_endpoints"],
        "selected_endpoints": cert["selected_endpoints"],
        "rn_exponents": cert["rn_exponents"],
        "machinery_samples": cert["machinery_samples"],
        "containment": cert["containment"],
        "passes": cert["passes"],
        "chains": [
            [format_path(segment) for segment in chain]
            for chain in partition.chains
        ],
        "unchained": [format_path(segment) for segment in partition.unchained],
    }


def _cmd_partition(args: argparse.Namespace, config: RunConfig) -> dict:
    if args.floor is None:
        entries = (0,) * args.l
    else:
        entries = parse_signature(args.floor).entries
    floor = RectYoungDiagram(args.k, args.l, entries)
    partition = chain_partition_young(args.k, args.l, floor)
    return {
        "command": "partition",
        "k": args.k,
        "l": args.l,
        "floor": list(entries),
        "universe_size": len(partition.universe),
        "chains": [
            [list(diagram.entries) for diagram in chain]
            for chain in partition.chains
        ],
    }


def _cmd_sample(args: argparse.Namespace, config: RunConfig) -> dict:
    if args.count < 1:
        raise DomainError("sample count must be at least 1")
    theta = parse_theta(args.theta)
    counts: dict[str, int] = {}
    for i in range(args.count):
        path = sample_path(
            theta,
            config.ctx,
            args.depth,
            config.seed + i,
            config.eps,
            config.depth_cap,
        )
        key = format_path(path)
        counts[key] = counts.get(key, 0) + 1
    rows = []
    for key in sorted(counts):
        count = counts[key]
        exact = cylinder_mass(
            theta, config.ctx, parse_path(key), config.eps, config.depth_cap
        ).value
        empirical = Fraction(count, args.count)
        spread = float(exact * (1 - exact)) / args.count
        z = (
            float(empirical - exact) / math.sqrt(spread)
            if spread > 0
            else 0.0
        )
        rows.append(
            {
                "path": key,
                "count": count,
                "empirical": _num(empirical),
                "exact": _num(exact),
                "z": float(f"{z:.15g}"),
            }
        )
    return {
        "command": "sample",
        "theta": args.theta.strip(),
        "depth": args.depth,
        "count": args.count,
        "seed": config.seed,
        "rows": rows,
    }


def _sample_csv(report: dict) -> str:
    lines = ["path,count,empirical,exact,z"]
    for row in report["rows"]:
        lines.append(
            f"\"{row['path']}\",{row['count']},{row['empirical']['float']:.15g},"
            f"{row['exact']['float']:.15g},{row['z']:.15g}"
        )
    return "\n".join(lines) + "\n"


_COMMANDS = {
    "dims": _cmd_dims,
    "classify": _cmd_classify,
    "measure": _cmd_measure,
    "ratio-set": _cmd_ratio_set,
    "partition": _cmd_partition,
    "sample": _cmd_sample,
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--q", default="1/2", help="deformation parameter in (0,1), e.g. 1/2 or 0.5")
    parser.add_argument("--eps", default="1/1000000000", help="relative convergence tolerance (rational or float)")
    parser.add_argument("--depth-cap", type=int, default=DEFAULT_DEPTH_CAP, help="largest working depth for limit evaluations")
    parser.add_argument("--seed", type=int, default=0, help="base seed for randomized commands")
    parser.add_argument("--output", default="-", help='output file, or "-" for stdout')
    parser.add_argument("--format", choices=("json", "csv"), default=None, help="report format (csv applies to sample only; default json)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gt-ergodica",
        description=(
            "Exact computations for q-central measures on the path space of "
            "nonincreasing integer vectors: dimensions, cylinder masses, "
            "density certificates, chain partitions, and sampling."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", help="weyl dimension, path count, and q-dimension of a signature")
    p.add_argument("--sig", required=True, help='signature as comma-separated entries, e.g. "3,1,0"')
    _add_common(p)

    p = sub.add_parser("classify", help="sort a theta sequence into I_1 / I_inf / III_q2")
    p.add_argument("--theta", required=True, help='e.g. "prefix=0,1;tail=const:1" or "prefix=;tail=affine:start=1,step=1"')
    p.add_argument("--evidence", action="store_true", help="attach atom masses or a density certificate digest")
    _add_common(p)

    p = sub.add_parser("measure", help="mass of a cylinder under a theta measure")
    p.add_argument("--theta", required=True, help="theta sequence description")
    p.add_argument("--path", required=True, help='path from the root as ";"-joined signatures, e.g. "1;2,1" (empty for the root)')
    p.add_argument("--check", action="store_true", help="also run the q-centrality consistency check at the path's level")
    _add_common(p)

    p = sub.add_parser("ratio-set", help="the q^2 density certificate for one cylinder")
    p.add_argument("--theta", required=True, help="unbounded theta sequence description")
    p.add_argument("--alpha", default="", help="cylinder path from the root (default: the root cylinder)")
    p.add_argument("--level", type=int, default=None, help="segment level L (default: smallest admissible)")
    _add_common(p)

    p = sub.add_parser("partition", help="one-box chain partition of a bounded-diagram interval")
    p.add_argument("--k", type=int, required=True, help="row bound (columns per row)")
    p.add_argument("--l", type=int, required=True, help="number of rows")
    p.add_argument("--floor", default=None, help='floor diagram rows, e.g. "2,1,0" (default: all zeros)')
    _add_common(p)

    p = sub.add_parser("sample", help="draw paths from a theta measure and compare to exact masses")
    p.add_argument("--theta", required=True, help="theta sequence description")
    p.add_argument("--depth", type=int, required=True, help="length of each sampled path")
    p.add_argument("--count", type=int, required=True, help="number of samples")
    _add_common(p)
    return parser


def _emit(report: dict, config: RunConfig) -> None:
    fmt = config.format or ("csv" if report["command"] == "sample" else "json")
    if fmt == "csv":
        if report["command"] != "sample":
            raise ParseError("csv format is only available for the sample command")
        text = _sample_csv(report)
    else:
        payload = {"schema": SCHEMA}
        payload.update(report)
        text = json.dumps(payload, indent=2) + "\n"
    if config.output == "-":
        sys.stdout.write(text)
    else:
        with open(config.output, "w", encoding="utf-8") as handle:
            handle.write(text)


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        config = _config_from(args)
        report = _COMMANDS[args.command](args, config)
        _emit(report, config)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
