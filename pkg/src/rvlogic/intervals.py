"""Finite unions of rational intervals inside [0, 1].

An :class:`IntervalSet` is always normalized: its intervals are sorted,
pairwise disjoint and no two of them can be merged into one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .formula import format_rational, parse_rational


@dataclass(frozen=True, order=False)
class Interval:
    lower: Fraction
    upper: Fraction
    lower_open: bool = False
    upper_open: bool = False

    def __post_init__(self):
        lo, hi = Fraction(self.lower), Fraction(self.upper)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        if not 0 <= lo <= hi <= 1:
            raise ValueError(f"interval endpoints must satisfy 0 <= {lo} <= {hi} <= 1")
        if lo == hi and (self.lower_open or self.upper_open):
            raise ValueError(f"degenerate interval {self} is empty")

    @classmethod
    def closed(cls, lo, hi) -> "Interval":
        return cls(lo, hi)

    @classmethod
    def open(cls, lo, hi) -> "Interval":
        return cls(lo, hi, True, True)

    @classmethod
    def point(cls, v) -> "Interval":
        return cls(v, v)

    @property
    def is_point(self) -> bool:
        return self.lower == self.upper

    def __contains__(self, v) -> bool:
        if v < self.lower or v > self.upper:
            return False
        if v == self.lower and self.lower_open:
            return False
        if v == self.upper and self.upper_open:
            return False
        return True

    def __str__(self) -> str:
        left = "(" if self.lower_open else "["
        right = ")" if self.upper_open else "]"
        return f"{left}{format_rational(self.lower)},{format_rational(self.upper)}{right}"


# Endpoint keys order starts and ends so that comparisons respect openness:
# an open start sits just right of its value, an open end just left of it.
def _start_key(iv: Interval) -> tuple[Fraction, int]:
    return (iv.lower, 1 if iv.lower_open else 0)


def _end_key(iv: Interval) -> tuple[Fraction, int]:
    return (iv.upper, -1 if iv.upper_open else 0)


def _make(start: tuple[Fraction, int], end: tuple[Fraction, int]) -> Interval | None:
    lo, lo_eps = start
    hi, hi_eps = end
    if lo > hi or (lo == hi and (lo_eps or hi_eps)):
        return None
    return Interval(lo, hi, lo_eps == 1, hi_eps == -1)


class IntervalSet:
    """An immutable, normalized union of intervals."""

    __slots__ = ("_intervals", "_hash")

    def __init__(self, intervals: Iterable[Interval] = ()):
        self._intervals = _normalize(list(intervals))
        self._hash = None

    @classmethod
    def _trusted(cls, intervals: list[Interval]) -> "IntervalSet":
        s = cls.__new__(cls)
        s._intervals = tuple(intervals)
        s._hash = None
        return s

    @classmethod
    def full(cls) -> "IntervalSet":
        return cls._trusted([Interval(0, 1)])

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls._trusted([])

    @classmethod
    def point(cls, v) -> "IntervalSet":
        return cls._trusted([Interval.point(v)])

    @classmethod
    def points(cls, values: Iterable) -> "IntervalSet":
        return cls(Interval.point(v) for v in values)

    @property
    def intervals(self) -> tuple[Interval, ...]:
        return self._intervals

    def __iter__(self) -> Iterator[Interval]:
        return iter(self._intervals)

    def __len__(self) -> int:
        return len(self._intervals)

    def __bool__(self) -> bool:
        return bool(self._intervals)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntervalSet) and self._intervals == other._intervals

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._intervals)
        return self._hash

    def __repr__(self) -> str:
        return f"IntervalSet({str(self)!r})"

    def __str__(self) -> str:
        if not self._intervals:
            return "{}"
        return ", ".join(str(iv) for iv in self._intervals)

    def __contains__(self, v) -> bool:
        return contains(self, v)

    @property
    def is_full(self) -> bool:
        return self._intervals == (Interval(0, 1),)

    def complement(self) -> "IntervalSet":
        return complement(self)

    def __and__(self, other: "IntervalSet") -> "IntervalSet":
        return intersect(self, other)

    def __or__(self, other: "IntervalSet") -> "IntervalSet":
        return union(self, other)

    def __invert__(self) -> "IntervalSet":
        return complement(self)


def _normalize(raw: list[Interval]) -> tuple[Interval, ...]:
    if not raw:
        return ()
    raw.sort(key=_start_key)
    merged: list[tuple[tuple[Fraction, int], tuple[Fraction, int]]] = []
    for iv in raw:
        start, end = _start_key(iv), _end_key(iv)
        if merged:
            prev_start, prev_end = merged[-1]
            # touching counts when at least one side contains the shared value
            if start[0] < prev_end[0] or (start[0] == prev_end[0] and not (start[1] == 1 and prev_end[1] == -1)):
                merged[-1] = (prev_start, max(prev_end, end))
                continue
        merged.append((start, end))
    return tuple(_make(s, e) for s, e in merged)


def normalize(raw: Iterable[Interval]) -> IntervalSet:
    """Canonical form of the union of ``raw``; membership is unchanged."""
    return IntervalSet(raw)


def union(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return IntervalSet([*a.intervals, *b.intervals])


def complement(s: IntervalSet) -> IntervalSet:
    """The set difference [0, 1] minus ``s``."""
    out: list[Interval] = []
    cursor: tuple[Fraction, int] = (Fraction(0), 0)
    for iv in s.intervals:
        lo, lo_open = iv.lower, iv.lower_open
        gap = _make(cursor, (lo, 0 if lo_open else -1))
        if gap is not None:
            out.append(gap)
        cursor = (iv.upper, 0 if iv.upper_open else 1)
    tail = _make(cursor, (Fraction(1), 0))
    if tail is not None:
        out.append(tail)
    return IntervalSet._trusted(out)


def intersect(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    out: list[Interval] = []
    xs, ys = a.intervals, b.intervals
    i = j = 0
    while i < len(xs) and j < len(ys):
        x, y = xs[i], ys[j]
        piece = _make(max(_start_key(x), _start_key(y)), min(_end_key(x), _end_key(y)))
        if piece is not None:
            out.append(piece)
        if _end_key(x) < _end_key(y):
            i += 1
        else:
            j += 1
    return IntervalSet._trusted(out)


def contains(s: IntervalSet, v) -> bool:
    ivs = s.intervals
    lo, hi = 0, len(ivs)
    # last interval whose lower endpoint is <= v
    while lo < hi:
        mid = (lo + hi) // 2
        if ivs[mid].lower <= v:
            lo = mid + 1
        else:
            hi = mid
    return lo > 0 and v in ivs[lo - 1]


def hull(s: IntervalSet) -> Interval | None:
    if not s:
        return None
    first, last = s.intervals[0], s.intervals[-1]
    return Interval(first.lower, last.upper, first.lower_open, last.upper_open)


_INTERVAL = re.compile(r"\s*([\[(])\s*([^,\])]+?)\s*,\s*([^,\])]+?)\s*([\])])\s*")


def parse_interval_set(text: str) -> IntervalSet:
    """Parse a comma- or ``∪``-separated union such as ``[0,0.2), (0.8,1]``.

    ``{}`` is the empty set and ``{a}`` or ``{a, b}`` list points.
    """
    body = text.strip()
    if body in ("{}", "∅", "empty"):
        return IntervalSet.empty()
    if body.startswith("{") and body.endswith("}"):
        return IntervalSet.points(parse_rational(t) for t in body[1:-1].split(","))
    out: list[Interval] = []
    pos = 0
    while pos < len(body):
        m = _INTERVAL.match(body, pos)
        if m is None:
            raise ValueError(f"malformed interval set {text!r} at position {pos}")
        left, lo, hi, right = m.groups()
        out.append(Interval(parse_rational(lo), parse_rational(hi), left == "(", right == ")"))
        pos = m.end()
        if pos < len(body):
            if body[pos] not in ",∪":
                raise ValueError(f"expected ',' between intervals in {text!r} at position {pos}")
            pos += 1
    return IntervalSet(out)
