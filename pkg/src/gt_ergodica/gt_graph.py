"""Signatures, interlacing, and path combinatorics on the graded graph of
nonincreasing integer vectors.

Level N holds the nonincreasing integer vectors of length N; the unique
level-0 vertex is the empty signature.  Edges join consecutive levels via
the interlacing relation, and finite paths are chains of such edges.
Everything in this module is exact integer combinatorics; weighted
counting lives in ``q_weights``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import ContractViolationError, DomainError, ParseError

__all__ = [
    "EMPTY",
    "PathPrefix",
    "Signature",
    "all_signatures",
    "count_paths",
    "enumerate_paths",
    "format_path",
    "format_signature",
    "has_path",
    "interlaces",
    "parse_path",
    "parse_signature",
    "paths_from_root",
    "predecessors",
    "successors_within",
    "weyl_dim",
    "window_bounds",
]


@dataclass(frozen=True, order=True)
class Signature:
    """A nonincreasing integer vector; ``entries == ()`` is the root vertex."""

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.entries, tuple):
            object.__setattr__(self, "entries", tuple(self.entries))
        for x in self.entries:
            if not isinstance(x, int) or isinstance(x, bool):
                raise DomainError(f"signature entries must be integers, got {x!r}")
        if any(a < b for a, b in zip(self.entries, self.entries[1:])):
            raise DomainError(f"signature entries must be nonincreasing: {self.entries}")

    @property
    def level(self) -> int:
        return len(self.entries)

    @property
    def size(self) -> int:
        """Sum of the entries; zero for the root."""
        return sum(self.entries)

    def shift(self, c: int) -> "Signature":
        """Add the constant ``c`` to every entry."""
        return Signature(tuple(x + c for x in self.entries))

    def __str__(self) -> str:  # pragma: no cover - convenience only
        return format_signature(self)


EMPTY = Signature(())


def format_signature(sig: Signature) -> str:
    """Serialize as comma-separated integers; the root becomes the empty string."""
    return ",".join(str(x) for x in sig.entries)


def parse_signature(text: str) -> Signature:
    """Inverse of :func:`format_signature`; ``""`` and ``"*"`` give the root."""
    text = text.strip()
    if text in ("", "*"):
        return EMPTY
    try:
        entries = tuple(int(part.strip()) for part in text.split(","))
    except ValueError as exc:
        raise ParseError(f"not a signature: {text!r}") from exc
    try:
        return Signature(entries)
    except DomainError as exc:
        raise ParseError(str(exc)) from exc


def interlaces(mu: Signature, lam: Signature) -> bool:
    """Whether ``mu`` (one level below ``lam``) interlaces it.

    The pattern is lam_1 >= mu_1 >= lam_2 >= ... >= mu_{N-1} >= lam_N.
    A level-1 ``lam`` interlaces with the root unconditionally.
    """
    if lam.level != mu.level + 1:
        raise ContractViolationError(
            f"interlacing needs consecutive levels, got {mu.level} and {lam.level}"
        )
    e, f = lam.entries, mu.entries
    return all(e[i] >= f[i] >= e[i + 1] for i in range(mu.level))


@dataclass(frozen=True)
class PathPrefix:
    """A finite path: a start signature and one signature per successive level."""

    start: Signature
    steps: tuple[Signature, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.steps, tuple):
            object.__setattr__(self, "steps", tuple(self.steps))
        prev = self.start
        for step in self.steps:
            if step.level != prev.level + 1:
                raise DomainError(
                    f"path levels must increase by one: {prev.entries} -> {step.entries}"
                )
            if not interlaces(prev, step):
                raise DomainError(
                    f"consecutive path entries must interlace: {prev.entries} -> {step.entries}"
                )
            prev = step

    @property
    def endpoint(self) -> Signature:
        return self.steps[-1] if self.steps else self.start

    @property
    def length(self) -> int:
        return len(self.steps)

    def signatures(self) -> tuple[Signature, ...]:
        return (self.start,) + self.steps

    def extended(self, sig: Signature) -> "PathPrefix":
        return PathPrefix(self.start, self.steps + (sig,))

    def concat(self, segment: "PathPrefix") -> "PathPrefix":
        if segment.start != self.endpoint:
            raise ContractViolationError("segment must continue from the path endpoint")
        return PathPrefix(self.start, self.steps + segment.steps)

    def prefix(self, level: int) -> "PathPrefix":
        """The initial portion of the path up to the given absolute level."""
        n = level - self.start.level
        if not 0 <= n <= self.length:
            raise ContractViolationError(f"no prefix at level {level}")
        return PathPrefix(self.start, self.steps[:n])

    def __str__(self) -> str:  # pragma: no cover - convenience only
        return format_path(self)


def format_path(path: PathPrefix) -> str:
    """Serialize a path; from the root it is the ";"-joined step signatures."""
    body = ";".join(format_signature(s) for s in path.steps)
    if path.start == EMPTY:
        return body
    return format_signature(path.start) + "|" + body


def parse_path(text: str) -> PathPrefix:
    """Inverse of :func:`format_path`."""
    text = text.strip()
    start = EMPTY
    if "|" in text:
        head, text = text.split("|", 1)
        start = parse_signature(head)
    if text == "":
        return PathPrefix(start, ())
    steps = tuple(parse_signature(part) for part in text.split(";"))
    try:
        return PathPrefix(start, steps)
    except DomainError as exc:
        raise ParseError(str(exc)) from exc


def predecessors(lam: Signature) -> list[Signature]:
    """All signatures one level down that interlace with ``lam``, ascending."""
    if lam.level < 1:
        raise ContractViolationError("the root has no predecessors")
    e = lam.entries
    ranges = [range(e[i + 1], e[i] + 1) for i in range(lam.level - 1)]
    return [Signature(combo) for combo in itertools.product(*ranges)]


def successors_within(mu: Signature, lo: int, hi: int) -> list[Signature]:
    """All one-level-up extensions of ``mu`` with every entry in [lo, hi]."""
    if lo > hi:
        return []
    m = mu.entries
    n = mu.level
    ranges = []
    for i in range(n + 1):
        if i == 0:
            left = max(m[0], lo) if n else lo
            right = hi
        elif i < n:
            left = max(m[i], lo)
            right = min(m[i - 1], hi)
        else:
            left = lo
            right = min(m[n - 1], hi)
        if left > right:
            return []
        ranges.append(range(left, right + 1))
    return [Signature(combo) for combo in itertools.product(*ranges)]


def successor_count_within(mu: Signature, lo: int, hi: int) -> int:
    """len(successors_within(mu, lo, hi)) without building the signatures."""
    if lo > hi:
        return 0
    m = mu.entries
    n = mu.level
    count = 1
    for i in range(n + 1):
        if i == 0:
            left = max(m[0], lo) if n else lo
            right = hi
        elif i < n:
            left = max(m[i], lo)
            right = min(m[i - 1], hi)
        else:
            left = lo
            right = min(m[n - 1], hi)
        if left > right:
            return 0
        count *= right - left + 1
    return count


def window_bounds(to: Signature, level: int) -> list[tuple[int, int]]:
    """Per-coordinate bounds for level-``level`` signatures on some path to ``to``.

    Coordinate i (0-based) of such a signature must lie in
    [to[i + gap], to[i]] where gap = to.level - level; both indices are
    always in range because level < to.level.
    """
    gap = to.level - level
    if gap <= 0:
        raise ContractViolationError("window level must be below the target level")
    e = to.entries
    return [(e[i + gap], e[i]) for i in range(level)]


def _fits_window(sig: Signature, to: Signature) -> bool:
    gap = to.level - sig.level
    e = to.entries
    return all(e[i + gap] <= v <= e[i] for i, v in enumerate(sig.entries))


def has_path(frm: Signature, to: Signature) -> bool:
    """Whether some interlacing chain joins ``frm`` up to ``to``.

    Decided by the window criterion: coordinate i of ``frm`` must lie in
    [to[i + gap], to[i]] with gap the level difference.  That this is
    equivalent to the existence of a chain is a standard completion
    argument; the property tests exercise it against brute enumeration.
    """
    if frm.level >= to.level:
        raise ContractViolationError("has_path needs frm.level < to.level")
    return _fits_window(frm, to)


def enumerate_paths(frm: Signature, to: Signature) -> list[PathPrefix]:
    """All interlacing chains from ``frm`` to ``to``, sorted by step entries."""
    if frm.level >= to.level:
        raise ContractViolationError("enumerate_paths needs frm.level < to.level")
    if not _fits_window(frm, to):
        return []
    lo, hi = min(to.entries), max(to.entries)
    frontier: list[tuple[Signature, tuple[Signature, ...]]] = [(frm, ())]
    for level in range(frm.level + 1, to.level + 1):
        nxt: list[tuple[Signature, tuple[Signature, ...]]] = []
        for sig, steps in frontier:
            if level == to.level:
                if interlaces(sig, to):
                    nxt.append((to, steps + (to,)))
                continue
            for cand in successors_within(sig, lo, hi):
                if _fits_window(cand, to):
                    nxt.append((cand, steps + (cand,)))
        frontier = nxt
    paths = [PathPrefix(frm, steps) for _, steps in frontier]
    paths.sort(key=lambda p: tuple(s.entries for s in p.steps))
    return paths


def count_paths(frm: Signature, to: Signature) -> int:
    """The number of interlacing chains from ``frm`` to ``to`` (windowed DP)."""
    if frm.level >= to.level:
        raise ContractViolationError("count_paths needs frm.level < to.level")
    if not _fits_window(frm, to):
        return 0
    lo, hi = min(to.entries), max(to.entries)
    counts: dict[Signature, int] = {frm: 1}
    for level in range(frm.level + 1, to.level + 1):
        nxt: dict[Signature, int] = {}
        for sig, c in counts.items():
            if level == to.level:
                if interlaces(sig, to):
                    nxt[to] = nxt.get(to, 0) + c
                continue
            for cand in successors_within(sig, lo, hi):
                if _fits_window(cand, to):
                    nxt[cand] = nxt.get(cand, 0) + c
        counts = nxt
    return counts.get(to, 0)


@lru_cache(maxsize=4096)
def paths_from_root(lam: Signature) -> tuple[PathPrefix, ...]:
    """Cached tuple of all paths from the root to ``lam`` (ascending order)."""
    return tuple(enumerate_paths(EMPTY, lam))


def weyl_dim(lam: Signature) -> int:
    """The product formula for the number of paths from the root to ``lam``.

    dim(lam) = prod_{i<j} ((lam_i - i) - (lam_j - j)) / (j - i), an exact
    integer; levels 0 and 1 give 1.
    """
    n = lam.level
    if n <= 1:
        return 1
    a = [lam.entries[i] - (i + 1) for i in range(n)]
    num = 1
    den = 1
    for i in range(n):
        for j in range(i + 1, n):
            num *= a[i] - a[j]
            den *= j - i
    q, r = divmod(num, den)
    if r:
        raise ContractViolationError("dimension product was not an integer")
    return q


def all_signatures(level: int, lo: int, hi: int) -> list[Signature]:
    """Every signature of the given level with entries in [lo, hi], ascending."""
    if level == 0:
        return [EMPTY]
    pool = range(hi, lo - 1, -1)
    sigs = [Signature(c) for c in itertools.combinations_with_replacement(pool, level)]
    sigs.sort()
    return sigs
