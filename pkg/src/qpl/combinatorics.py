"""Brute-force enumeration of overpartitions and 2-color partitions.

These are the counting oracles for the overpartition generating functions:
every count here comes from listing objects, never from a series.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

ENUM_LIMIT = 25


@dataclass(frozen=True)
class Overpartition:
    """Parts in weakly decreasing order; ``overlined[t]`` flags part t.

    Only the first copy of a size may carry the overline.
    """

    parts: tuple[int, ...]
    overlined: tuple[bool, ...]

    def __post_init__(self):
        if len(self.parts) != len(self.overlined):
            raise ValueError("parts and overline flags differ in length")
        if any(p <= 0 for p in self.parts):
            raise ValueError("parts must be positive")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise ValueError("parts must be weakly decreasing")
        for t, flag in enumerate(self.overlined):
            if flag and t > 0 and self.parts[t - 1] == self.parts[t]:
                raise ValueError(f"overline on a repeated copy of {self.parts[t]}")

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def copies(self) -> tuple[Counter, set[int]]:
        """(plain copies per size, sizes carrying an overlined copy)."""
        plain: Counter = Counter()
        over = set()
        for p, f in zip(self.parts, self.overlined):
            if f:
                over.add(p)
            else:
                plain[p] += 1
        return plain, over

    def shifted(self, j: int) -> Overpartition:
        return Overpartition(tuple(p + j for p in self.parts), self.overlined)

    def __str__(self) -> str:
        if not self.parts:
            return "0"
        return "+".join(f"{p}~" if f else str(p) for p, f in zip(self.parts, self.overlined))

    @classmethod
    def parse(cls, text: str) -> Overpartition:
        text = text.strip()
        if text in ("", "0"):
            return cls((), ())
        parts, flags = [], []
        for tok in text.split("+"):
            tok = tok.strip()
            flags.append(tok.endswith("~"))
            parts.append(int(tok.rstrip("~")))
        return cls(tuple(parts), tuple(flags))

    def to_list(self) -> list[list]:
        return [[p, f] for p, f in zip(self.parts, self.overlined)]


def enum_overpartitions(n: int) -> list[Overpartition]:
    """All overpartitions of n, by descent on the largest remaining size."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > ENUM_LIMIT:
        raise ValueError(f"full enumeration is capped at n <= {ENUM_LIMIT}")
    out: list[Overpartition] = []

    def rec(rest: int, max_size: int, parts: list[int], flags: list[bool]):
        if rest == 0:
            out.append(Overpartition(tuple(parts), tuple(flags)))
            return
        for s in range(min(rest, max_size), 0, -1):
            for mult in range(1, rest // s + 1):
                for over in (False, True):
                    parts.extend([s] * mult)
                    flags.extend([over] + [False] * (mult - 1))
                    rec(rest - s * mult, s - 1, parts, flags)
                    del parts[-mult:]
                    del flags[-mult:]

    rec(n, n, [], [])
    return out


@dataclass(frozen=True)
class SeqPattern:
    """Offsets with overline flags; matches if some shift j >= 0 embeds it.

    Embedding is multiset containment: an overlined entry needs the overlined
    copy of its size, and plain entries of equal size need that many distinct
    plain copies.
    """

    entries: tuple[tuple[int, bool], ...]

    def matches_at(self, op: Overpartition, j: int) -> bool:
        plain, over = op.copies()
        need_plain: Counter = Counter()
        for a, f in self.entries:
            if f:
                if a + j not in over:
                    return False
            else:
                need_plain[a + j] += 1
        return all(plain[s] >= c for s, c in need_plain.items())

    def shifts(self, op: Overpartition) -> Iterator[int]:
        """Every j >= 0 at which the pattern embeds."""
        if not self.entries or not op.parts:
            return
        lo = min(a for a, _ in self.entries)
        for j in range(max(0, 1 - lo), op.parts[0] - lo + 1):
            if self.matches_at(op, j):
                yield j

    def matches(self, op: Overpartition) -> bool:
        if not self.entries:
            return True
        return next(self.shifts(op), None) is not None

    @property
    def top_overlined(self) -> int:
        return max(a for a, f in self.entries if f)

    def shifted(self, j: int) -> SeqPattern:
        return SeqPattern(tuple((a + j, f) for a, f in self.entries))

    def __str__(self) -> str:
        return "+".join(f"{a}~" if f else str(a) for a, f in self.entries)


@dataclass(frozen=True)
class GuardedPattern:
    """A pattern whose occurrence at shift j is excused by an overlined part in guard + j."""

    pattern: SeqPattern
    guard: tuple[int, int] | None = None

    def violated_by(self, op: Overpartition) -> bool:
        if self.guard is None:
            return self.pattern.matches(op)
        _, over = op.copies()
        lo, hi = self.guard
        return any(not any(lo + j <= t <= hi + j for t in over) for j in self.pattern.shifts(op))

    def __str__(self) -> str:
        if self.guard is None:
            return str(self.pattern)
        return f"{self.pattern} unless an overlined part lies in [{self.guard[0]}, {self.guard[1]}] (shifted alike)"


READINGS = ("literal", "calibrated")


@dataclass(frozen=True)
class Constraints:
    """What an admissible overpartition must avoid for given (i, k).

    ``literal`` applies the adjacency rule, the length-(2k+1) run and the
    smallest-overline bound exactly as worded.  ``calibrated`` is the reading
    whose counts equal the generating function:

    * i = 0: the final gap of the run, between its last two overlined parts,
      may be any nonempty run of plain consecutive sizes, not only one part.
    * i > 0: an occurrence of the run is harmless when some overlined part
      sits between two above its last overlined part and 2k+1+i (shifted
      with the occurrence).
    """

    i: int
    k: int
    reading: str = "calibrated"

    def __post_init__(self):
        if self.reading not in READINGS:
            raise ValueError(f"unknown reading {self.reading!r}")
        sequence_pattern(self.i, self.k)  # validates (i, k)
        if self.reading == "calibrated" and self.k < 1:
            raise ValueError("the calibrated reading needs k >= 1")

    @property
    def min_overlined(self) -> int:
        """Every overlined part must exceed this."""
        return self.i

    def patterns(self, top: int) -> list[GuardedPattern]:
        """The rules relevant to overpartitions whose largest part is ``top``."""
        run = sequence_pattern(self.i, self.k)
        out = [GuardedPattern(ADJACENT_OVERLINES)]
        if self.reading == "literal":
            out.append(GuardedPattern(run))
        elif self.i == 0:
            out.extend(GuardedPattern(p) for p in stretched_runs(self.k, top))
        else:
            out.append(GuardedPattern(run, (run.top_overlined + 2, 2 * self.k + 1 + self.i)))
        return out

    def admits(self, op: Overpartition) -> bool:
        _, over = op.copies()
        if any(s <= self.min_overlined for s in over):
            return False
        top = op.parts[0] if op.parts else 0
        return not any(g.violated_by(op) for g in self.patterns(top))


def sequence_pattern(i: int, k: int) -> SeqPattern:
    """The forbidden run of 2k+1 parts.

    i = 0:  1~ + 2 + 3~ + 4 + ... + (2k+1)~, odd sizes overlined.
    i > 0:  2 + 3 + ... + i, then (i+1)~, then (i+1), (i+2), ..., (2k+1) with
            size s overlined iff s - i is odd.
    """
    if i < 0 or k < 0:
        raise ValueError("i and k must be non-negative")
    s = 2 * k + 1
    if i == 0:
        return SeqPattern(tuple((a, a % 2 == 1) for a in range(1, s + 1)))
    if i > s:
        raise ValueError(f"sequence condition is only defined for i <= 2k+1 (got i={i}, k={k})")
    entries = [(a, False) for a in range(2, i + 1)]
    entries.append((i + 1, True))
    entries.extend((a, a >= i + 2 and (a - i) % 2 == 1) for a in range(i + 1, s + 1))
    return SeqPattern(tuple(entries))


def stretched_runs(k: int, top: int) -> list[SeqPattern]:
    """1~ + 2 + 3~ + ... + (2k-1)~ + 2k + ... + m + (m+1)~ for 2k <= m < top."""
    head = [(a, a % 2 == 1) for a in range(1, 2 * k)]
    return [SeqPattern(tuple(head + [(a, False) for a in range(2 * k, m + 1)] + [(m + 1, True)]))
            for m in range(2 * k, max(top, 2 * k + 1))]


ADJACENT_OVERLINES = SeqPattern(((0, True), (1, True)))


def forbidden_patterns(i: int, k: int, reading: str = "calibrated") -> Constraints:
    return Constraints(i, k, reading)


def count_filtered(n: int, i: int, k: int, reading: str = "calibrated") -> tuple[int, tuple[int, ...]]:
    """(number admitted, counts indexed by number of parts 0..n)."""
    cons = forbidden_patterns(i, k, reading)
    by_parts = [0] * (n + 1)
    for op in enum_overpartitions(n):
        if cons.admits(op):
            by_parts[len(op)] += 1
    return sum(by_parts), tuple(by_parts)


def filtered(n: int, i: int, k: int, reading: str = "calibrated") -> list[Overpartition]:
    cons = forbidden_patterns(i, k, reading)
    return [op for op in enum_overpartitions(n) if cons.admits(op)]


# -- 2-color partitions ------------------------------------------------------

@dataclass(frozen=True)
class TwoColorPartition:
    """Red parts are unrestricted; green parts are 1 mod 3.  Both decreasing."""

    red: tuple[int, ...]
    green: tuple[int, ...]

    def __post_init__(self):
        if any(g % 3 != 1 for g in self.green):
            raise ValueError("green parts must be 1 mod 3")

    @property
    def weight(self) -> int:
        return sum(self.red) + sum(self.green)

    def __str__(self) -> str:
        red = "+".join(f"{p}r" for p in self.red)
        green = "+".join(f"{p}g" for p in self.green)
        return "+".join(x for x in (red, green) if x) or "0"


def _partitions(n: int, sizes: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """Partitions of n into parts from ``sizes`` (descending), parts decreasing."""
    if n == 0:
        yield ()
        return
    for t, s in enumerate(sizes):
        if s <= n:
            for rest in _partitions(n - s, sizes[t:]):
                yield (s,) + rest


def enum_2color(n: int) -> Iterator[TwoColorPartition]:
    if n < 0:
        raise ValueError("n must be non-negative")
    red_sizes = tuple(range(n, 0, -1))
    green_sizes = tuple(g for g in red_sizes if g % 3 == 1)
    for w in range(n + 1):
        greens = list(_partitions(n - w, green_sizes))
        for red in _partitions(w, red_sizes):
            for green in greens:
                yield TwoColorPartition(red, green)


@lru_cache(maxsize=None)
def count_2color(n: int) -> int:
    return sum(1 for _ in enum_2color(n))


def overpartitions_json(ops: list[Overpartition]) -> str:
    return json.dumps([op.to_list() for op in ops])
