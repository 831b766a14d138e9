"""Simple sentences, theories and the ``.rvl`` theory file format.

A theory file holds one declaration per line::

    # comment
    logic goedel
    sentence: (x & y) -> z in [1,1]
    sentence: x, y in [0,0.5] x (0.5,1]
    query: z in [0.5,1]

A sentence listing several comma-separated components takes one interval
set per component, joined by ``x`` (or ``×``); it is decomposed into one
simple sentence per component as soon as it is read.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

from .formula import Formula, ParseError, is_weighted, parse_formula, to_text
from .intervals import IntervalSet, complement, contains, parse_interval_set
from .semantics import Logic, Model, evaluate


class TheoryError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class SimpleSentence:
    formula: Formula
    values: IntervalSet

    def __str__(self) -> str:
        return f"{to_text(self.formula)} in {self.values}"

    def satisfied_by(self, logic: Logic, model: Model) -> bool:
        return contains(self.values, evaluate(logic, self.formula, model))


@dataclass(frozen=True)
class Theory:
    logic: Logic
    sentences: tuple[SimpleSentence, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))
        if self.logic is Logic.GOEDEL:
            for s in self.sentences:
                if is_weighted(s.formula):
                    raise TheoryError(f"weighted formula {to_text(s.formula)} under Goedel logic")

    def with_logic(self, logic: Logic) -> "Theory":
        return Theory(logic, self.sentences)

    def satisfied_by(self, model: Model) -> bool:
        return all(s.satisfied_by(self.logic, model) for s in self.sentences)


def negate_sentence(s: SimpleSentence) -> SimpleSentence:
    """The sentence holding in exactly the models where ``s`` fails."""
    return SimpleSentence(s.formula, complement(s.values))


def decompose_interval_sentence(
    components: Sequence[Formula], product: Sequence[IntervalSet]
) -> list[SimpleSentence]:
    """Split ``(σ1..σk, S1 × ... × Sk)`` into the simple sentences ``(σi, Si)``."""
    if len(components) != len(product):
        raise TheoryError(f"{len(components)} components but {len(product)} interval sets")
    if len(set(components)) != len(components):
        raise TheoryError("sentence components must be pairwise distinct")
    return [SimpleSentence(f, s) for f, s in zip(components, product)]


@dataclass(frozen=True)
class TheoryFile:
    theory: Theory
    query: tuple[SimpleSentence, ...] | None
    logic_declared: bool


_DECL = re.compile(r"^(sentence|query)\s*:\s*(.*)$")
_IN = re.compile(r"\bin\b")
_PRODUCT = re.compile(r"\s+(?:x|×)\s+|×")


def _split_top_level(text: str, sep: str = ",") -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


def _parse_declaration(body: str, lineno: int) -> list[SimpleSentence]:
    matches = list(_IN.finditer(body))
    if not matches:
        raise TheoryError("expected '<formula> in <interval set>'", lineno)
    cut = matches[-1]
    formula_text, set_text = body[: cut.start()], body[cut.end():]
    try:
        formulas = [parse_formula(t) for t in _split_top_level(formula_text)]
    except ParseError as e:
        raise TheoryError(f"formula: {e}", lineno) from None
    try:
        sets = [parse_interval_set(t) for t in _PRODUCT.split(set_text.strip())]
    except ValueError as e:
        raise TheoryError(f"interval set: {e}", lineno) from None
    try:
        return decompose_interval_sentence(formulas, sets)
    except TheoryError as e:
        raise TheoryError(str(e), lineno) from None


def parse_theory(text: str, logic: Logic | None = None) -> TheoryFile:
    """Parse a theory file.

    ``logic`` overrides the file's ``logic`` line; files without one default
    to Łukasiewicz.
    """
    declared: Logic | None = None
    sentences: list[SimpleSentence] = []
    query: list[SimpleSentence] | None = None
    weighted_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("logic"):
            parts = line.split()
            if len(parts) != 2:
                raise TheoryError("expected 'logic lukasiewicz|goedel'", lineno)
            try:
                declared = Logic(parts[1].lower())
            except ValueError:
                raise TheoryError(f"unknown logic {parts[1]!r}", lineno) from None
            continue
        m = _DECL.match(line)
        if m is None:
            raise TheoryError(f"unrecognized declaration {line!r}", lineno)
        parsed = _parse_declaration(m.group(2), lineno)
        if weighted_line is None and any(is_weighted(s.formula) for s in parsed):
            weighted_line = lineno
        if m.group(1) == "sentence":
            sentences.extend(parsed)
        else:
            if query is not None:
                raise TheoryError("a theory file holds at most one query", lineno)
            query = parsed
    effective = logic or declared or Logic.LUKASIEWICZ
    if effective is Logic.GOEDEL and weighted_line is not None:
        raise TheoryError("weighted connectives are only available in Lukasiewicz logic", weighted_line)
    return TheoryFile(Theory(effective, sentences), tuple(query) if query is not None else None, declared is not None)


def format_theory(theory: Theory, query: Sequence[SimpleSentence] | None = None, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"logic {theory.logic.value}")
    lines.extend(f"sentence: {s}" for s in theory.sentences)
    if query:
        formulas = ", ".join(to_text(s.formula) for s in query)
        sets = " x ".join(str(s.values) for s in query)
        lines.append(f"query: {formulas} in {sets}")
    return "\n".join(lines) + "\n"


def sentence(text_formula: str, text_set: str) -> SimpleSentence:
    """Convenience constructor from concrete syntax."""
    return SimpleSentence(parse_formula(text_formula), parse_interval_set(text_set))

