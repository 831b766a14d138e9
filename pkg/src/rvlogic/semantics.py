"""Truth functions of the Łukasiewicz and Gödel connectives and model evaluation."""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Mapping, Sequence

from .formula import Atom, Binary, Connective, Constant, Formula, Unary, Weighted

ZERO = Fraction(0)
ONE = Fraction(1)


class Logic(enum.Enum):
    LUKASIEWICZ = "lukasiewicz"
    GOEDEL = "goedel"

    @classmethod
    def parse(cls, text: str) -> "Logic":
        key = text.strip().lower()
        aliases = {"l": cls.LUKASIEWICZ, "luk": cls.LUKASIEWICZ, "g": cls.GOEDEL, "godel": cls.GOEDEL}
        try:
            return aliases.get(key) or cls(key)
        except ValueError:
            raise ValueError(f"unknown logic {text!r}") from None


class SemanticsError(ValueError):
    pass


Model = Mapping[str, Fraction]


def _clamp(v: Fraction) -> Fraction:
    return min(ONE, max(ZERO, v))


def connective_value(
    logic: Logic,
    connective: Connective,
    args: Sequence[Fraction],
    weights: tuple[Fraction, Fraction] | None = None,
) -> Fraction:
    """Value of ``connective`` applied to ``args`` under ``logic``.

    ``weights`` selects the weighted Łukasiewicz forms
    ``min{1, w1 a + w2 b}`` and ``max{0, 1 - w1 (1-a) - w2 (1-b)}``.
    """
    if weights is not None:
        if logic is not Logic.LUKASIEWICZ:
            raise SemanticsError("weighted connectives are defined only for Lukasiewicz logic")
        a, b = args
        w1, w2 = weights
        if connective is Connective.STRONG_OR:
            return min(ONE, w1 * a + w2 * b)
        if connective is Connective.STRONG_AND:
            return max(ZERO, 1 - w1 * (1 - a) - w2 * (1 - b))
        raise SemanticsError(f"no weighted form of {connective.name}")

    if connective.is_unary:
        (a,) = args
        if connective is Connective.INV:
            return 1 - a
        if connective is Connective.DELTA:
            return ONE if a == 1 else ZERO
        # NOT
        if logic is Logic.LUKASIEWICZ:
            return 1 - a
        return ONE if a == 0 else ZERO

    a, b = args
    if connective is Connective.WEAK_AND:
        return min(a, b)
    if connective is Connective.WEAK_OR:
        return max(a, b)
    if connective is Connective.EQUIV:
        forward = connective_value(logic, Connective.IMPLIES, (a, b))
        backward = connective_value(logic, Connective.IMPLIES, (b, a))
        return connective_value(logic, Connective.STRONG_AND, (forward, backward))
    if logic is Logic.LUKASIEWICZ:
        if connective is Connective.STRONG_AND:
            return max(ZERO, a + b - 1)
        if connective is Connective.STRONG_OR:
            return min(ONE, a + b)
        return min(ONE, 1 - a + b)
    if connective is Connective.STRONG_AND:
        return min(a, b)
    if connective is Connective.STRONG_OR:
        return max(a, b)
    return ONE if a <= b else b


def evaluate(logic: Logic, f: Formula, model: Model) -> Fraction:
    """Truth value of ``f`` under the atom assignment ``model``."""
    if isinstance(f, Atom):
        try:
            v = Fraction(model[f.name])
        except KeyError:
            raise SemanticsError(f"atom {f.name!r} is not bound by the model") from None
        if not 0 <= v <= 1:
            raise SemanticsError(f"atom {f.name!r} has value {v} outside [0,1]")
        return v
    if isinstance(f, Constant):
        return f.value
    if isinstance(f, Unary):
        return connective_value(logic, f.connective, (evaluate(logic, f.child, model),))
    args = (evaluate(logic, f.left, model), evaluate(logic, f.right, model))
    if isinstance(f, Weighted):
        return connective_value(logic, f.connective, args, f.weights)
    assert isinstance(f, Binary)
    return connective_value(logic, f.connective, args)


def evaluate_all(logic: Logic, formulas, model: Model) -> dict[Formula, Fraction]:
    """Values of several formulas, sharing work across common subformulas."""
    memo: dict[Formula, Fraction] = {}

    def go(f: Formula) -> Fraction:
        v = memo.get(f)
        if v is not None:
            return v
        if isinstance(f, (Atom, Constant)):
            v = evaluate(logic, f, model)
        elif isinstance(f, Unary):
            v = connective_value(logic, f.connective, (go(f.child),))
        elif isinstance(f, Weighted):
            v = connective_value(logic, f.connective, (go(f.left), go(f.right)), f.weights)
        else:
            v = connective_value(logic, f.connective, (go(f.left), go(f.right)))
        memo[f] = v
        return v

    return {f: go(f) for f in formulas}
