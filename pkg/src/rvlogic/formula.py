"""Formula syntax trees, a recursive-descent parser and a canonical printer.

Grammar, tightest binding first::

    prefix     !f (Not)   ~f (Inv)   ^f (Delta)
    conj       f & g (StrongAnd)   f && g (WeakAnd)          left-assoc
    disj       f | g (StrongOr)    f || g (WeakOr)           left-assoc
    implies    f -> g                                        right-assoc
    equiv      f <-> g                                       left-assoc

plus weighted forms ``wand[w1,w2](f,g)`` / ``wor[w1,w2](f,g)``, constants
written as decimals or ``p/q`` and parentheses.
"""

from __future__ import annotations

import enum
import heapq
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union


class Connective(enum.Enum):
    NOT = "!"
    INV = "~"
    DELTA = "^"
    STRONG_AND = "&"
    WEAK_AND = "&&"
    STRONG_OR = "|"
    WEAK_OR = "||"
    IMPLIES = "->"
    EQUIV = "<->"

    @property
    def is_unary(self) -> bool:
        return self in UNARY


UNARY = frozenset({Connective.NOT, Connective.INV, Connective.DELTA})
BINARY = frozenset(Connective) - UNARY
WEIGHTABLE = frozenset({Connective.STRONG_AND, Connective.STRONG_OR})


class FormulaError(ValueError):
    """Raised for formulas violating a structural invariant."""


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Constant:
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))
        if not 0 <= self.value <= 1:
            raise FormulaError(f"constant {self.value} outside [0,1]")

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Unary:
    connective: Connective
    child: "Formula"

    def __post_init__(self):
        if self.connective not in UNARY:
            raise FormulaError(f"{self.connective.name} is not unary")

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Binary:
    connective: Connective
    left: "Formula"
    right: "Formula"

    def __post_init__(self):
        if self.connective not in BINARY:
            raise FormulaError(f"{self.connective.name} is not binary")

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Weighted:
    """A binary connective whose operands carry nonnegative rational weights."""

    connective: Connective
    left_weight: Fraction
    right_weight: Fraction
    left: "Formula"
    right: "Formula"

    def __post_init__(self):
        if self.connective not in WEIGHTABLE:
            raise FormulaError(f"{self.connective.name} cannot carry weights")
        for name in ("left_weight", "right_weight"):
            w = Fraction(getattr(self, name))
            if w < 0:
                raise FormulaError(f"weight {w} is negative")
            object.__setattr__(self, name, w)

    @property
    def weights(self) -> tuple[Fraction, Fraction]:
        return self.left_weight, self.right_weight

    def __str__(self) -> str:
        return to_text(self)


Formula = Union[Atom, Constant, Unary, Binary, Weighted]


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Unary):
        return (f.child,)
    if isinstance(f, (Binary, Weighted)):
        return (f.left, f.right)
    return ()


def atoms(f: Formula) -> set[str]:
    """Names of the atomic propositions occurring in ``f``."""
    found: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            found.add(g.name)
        else:
            stack.extend(children(g))
    return found


def is_weighted(f: Formula) -> bool:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Weighted):
            return True
        stack.extend(children(g))
    return False


def subformula_closure(formulas: Iterable[Formula]) -> list[Formula]:
    """Every input formula and all of its subformulas, children before parents.

    Ties between formulas that are simultaneously ready are broken by their
    printed form, so the order is a function of the set alone.
    """
    seen: set[Formula] = set()
    stack = list(formulas)
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        stack.extend(children(g))

    pending = {g: len(set(children(g))) for g in seen}
    parents: dict[Formula, list[Formula]] = {g: [] for g in seen}
    for g in seen:
        for c in set(children(g)):
            parents[c].append(g)
    text = {g: to_text(g) for g in seen}
    ready = [(text[g], i, g) for i, g in enumerate(g for g in seen if pending[g] == 0)]
    heapq.heapify(ready)
    order: list[Formula] = []
    counter = len(ready)
    while ready:
        _, _, g = heapq.heappop(ready)
        order.append(g)
        for p in parents[g]:
            pending[p] -= 1
            if pending[p] == 0:
                counter += 1
                heapq.heappush(ready, (text[p], counter, p))
    return order


# printing

_PREC = {
    Connective.EQUIV: 1,
    Connective.IMPLIES: 2,
    Connective.STRONG_OR: 3,
    Connective.WEAK_OR: 3,
    Connective.STRONG_AND: 4,
    Connective.WEAK_AND: 4,
}
_ATOMIC_PREC = 10


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _prec(f: Formula) -> int:
    if isinstance(f, Binary):
        return _PREC[f.connective]
    if isinstance(f, Unary):
        return 5
    return _ATOMIC_PREC


def to_text(f: Formula) -> str:
    """Render ``f`` with the minimum parentheses needed to parse it back."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Constant):
        return format_rational(f.value)
    if isinstance(f, Unary):
        inner = to_text(f.child)
        if _prec(f.child) < 5:
            inner = f"({inner})"
        return f"{f.connective.value}{inner}"
    if isinstance(f, Weighted):
        name = "wand" if f.connective is Connective.STRONG_AND else "wor"
        w1, w2 = (format_rational(w) for w in f.weights)
        return f"{name}[{w1},{w2}]({to_text(f.left)}, {to_text(f.right)})"
    p = _PREC[f.connective]
    right_assoc = f.connective is Connective.IMPLIES
    left, right = to_text(f.left), to_text(f.right)
    lp, rp = _prec(f.left), _prec(f.right)
    if lp < p or (lp == p and right_assoc):
        left = f"({left})"
    if rp < p or (rp == p and not right_assoc):
        right = f"({right})"
    return f"{left} {f.connective.value} {right}"


# parsing

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>-?(?:\d+(?:\.\d*)?(?:/\d+)?|\.\d+))
  | (?P<weighted>w(?:and|or)\s*\[)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><->|->|&&|\|\||[&|!~^()\[\],])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational number: {text!r}") from None


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self, value: str | None = None) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            found = tok[1] or "end of input"
            raise ParseError(f"expected {value!r}, found {found!r}", tok[2], self.text)
        self.i += 1
        return tok

    def error(self, message: str, pos: int | None = None):
        return ParseError(message, self.peek()[2] if pos is None else pos, self.text)

    def parse(self) -> Formula:
        f = self.equiv()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return f

    def equiv(self) -> Formula:
        f = self.implies()
        while self.peek()[1] == "<->":
            self.take()
            f = Binary(Connective.EQUIV, f, self.implies())
        return f

    def implies(self) -> Formula:
        f = self.disj()
        if self.peek()[1] == "->":
            self.take()
            return Binary(Connective.IMPLIES, f, self.implies())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek()[1] in ("|", "||"):
            op = Connective(self.take()[1])
            f = Binary(op, f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.prefix()
        while self.peek()[1] in ("&", "&&"):
            op = Connective(self.take()[1])
            f = Binary(op, f, self.prefix())
        return f

    def prefix(self) -> Formula:
        kind, value, pos = self.peek()
        if value in ("!", "~", "^"):
            self.take()
            return Unary(Connective(value), self.prefix())
        if value == "(":
            self.take()
            f = self.equiv()
            self.take(")")
            return f
        if kind == "number":
            self.take()
            q = parse_rational(value)
            if not 0 <= q <= 1:
                raise ParseError(f"constant {value} out of range [0,1]", pos, self.text)
            return Constant(q)
        if kind == "weighted":
            return self.weighted()
        if kind == "ident":
            self.take()
            return Atom(value)
        raise self.error(f"expected a formula, found {value or 'end of input'!r}")

    def weight(self) -> Fraction:
        kind, value, pos = self.peek()
        if kind != "number":
            raise self.error("weights must be nonnegative rationals")
        self.take()
        w = parse_rational(value)
        if w < 0:
            raise ParseError(f"weight {value} is not a nonnegative rational", pos, self.text)
        return w

    def weighted(self) -> Formula:
        _, value, pos = self.take()
        op = Connective.STRONG_AND if value.startswith("wand") else Connective.STRONG_OR
        w1 = self.weight()
        self.take(",")
        w2 = self.weight()
        self.take("]")
        self.take("(")
        left = self.equiv()
        self.take(",")
        right = self.equiv()
        self.take(")")
        return Weighted(op, w1, w2, left, right)


def parse_formula(text: str) -> Formula:
    """Parse ``text`` into a formula; decimal literals become exact rationals."""
    return _Parser(text).parse()
