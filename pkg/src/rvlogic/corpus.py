"""Benchmark families: k-SAT, the Hájek tautologies, the Boolean example and the stress test.

Tautologies use the atoms ``p, q, r, s`` for the metavariables φ, ψ, χ, ω.
``&``/``|`` are the strong connectives, ``&&``/``||`` the weak ones.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .formula import Atom, Binary, Connective, Formula, Unary, parse_formula
from .intervals import Interval, IntervalSet
from .semantics import Logic
from .theory import SimpleSentence, Theory, format_theory

BOTH = frozenset(Logic)
LUK = frozenset({Logic.LUKASIEWICZ})
GOEDEL = frozenset({Logic.GOEDEL})


@dataclass(frozen=True)
class KSatInstance:
    k: int
    clauses: tuple[Formula, ...]
    dropped: int | None = None


def ksat_clauses(k: int) -> list[Formula]:
    """CNF of (x1 & !x1) | ... | (xk & !xk): every choice of one literal per atom.

    Clauses are ordered by the number of negated literals, then by which atoms
    are negated.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    clauses = []
    for m in range(k + 1):
        for negated in itertools.combinations(range(k), m):
            lits: list[Formula] = []
            for i in range(k):
                x = Atom(f"x{i + 1}")
                lits.append(Unary(Connective.NOT, x) if i in negated else x)
            clause = lits[0]
            for lit in lits[1:]:
                clause = Binary(Connective.STRONG_OR, clause, lit)
            clauses.append(clause)
    return clauses


def ksat_instance(k: int, dropped: int | None = None) -> KSatInstance:
    clauses = ksat_clauses(k)
    if dropped is not None:
        if not 0 <= dropped < len(clauses):
            raise ValueError(f"dropped clause {dropped} out of range 0..{len(clauses) - 1}")
        clauses.pop(dropped)
    return KSatInstance(k, tuple(clauses), dropped)


def gen_ksat(k: int, dropped: int | None = None, constrain: bool = False,
             logic: Logic = Logic.LUKASIEWICZ) -> Theory:
    """Each clause at value exactly 1; ``constrain`` keeps atoms near 0 or 1."""
    inst = ksat_instance(k, dropped)
    one = IntervalSet.point(1)
    sentences = [SimpleSentence(c, one) for c in inst.clauses]
    if constrain:
        near = IntervalSet([Interval(0, Fraction(1, k), False, True), Interval(Fraction(k - 1, k), 1, True, False)])
        sentences += [SimpleSentence(Atom(f"x{i + 1}"), near) for i in range(k)]
    return Theory(logic, sentences)


@dataclass(frozen=True)
class TautologyCase:
    batch: str
    index: int
    formula: Formula
    logics: frozenset

    @property
    def name(self) -> str:
        return f"{self.batch}_{self.index}"


_HAJEK: dict[str, tuple[frozenset, list[str]]] = {
    "axioms": (BOTH, [
        "(p -> q) -> ((q -> r) -> (p -> r))",
        "p & q -> p",
        "p & q -> q & p",
        "p & (p -> q) -> q & (q -> p)",
        "(p -> (q -> r)) -> (p & q -> r)",
        "(p & q -> r) -> (p -> (q -> r))",
        "((p -> q) -> r) -> (((q -> p) -> r) -> r)",
        "0 -> p",
    ]),
    "implication": (BOTH, [
        "p -> (q -> p)",
        "(p -> (q -> r)) -> (q -> (p -> r))",
        "p -> p",
    ]),
    "conjunction": (BOTH, [
        "p & (p -> q) -> q",
        "p -> (q -> p & q)",
        "(p -> q) -> (p & r -> q & r)",
        "(p -> q) & (r -> s) -> (p & r -> q & s)",
        "(p -> q) & (q -> r) -> (p -> r)",
        "p & q -> q",
    ]),
    "weak_conjunction": (BOTH, [
        "p && q -> p",
        "p && q -> q",
        "p && q -> q && p",
        "p & q -> p && q",
        "(p -> q) -> (p && r -> q && r)",
        "(p -> q) && (p -> r) -> (p -> q && r)",
        "p && q <-> p & (p -> q)",
    ]),
    "weak_disjunction": (BOTH, [
        "p -> p || q",
        "q -> p || q",
        "p || q -> q || p",
        "(p -> r) -> ((q -> r) -> (p || q -> r))",
        "(p -> r) && (q -> r) -> (p || q -> r)",
        "(p -> q) || (q -> p)",
        "p || p -> p",
    ]),
    "negation": (BOTH, [
        "p -> (!p -> q)",
        "!p -> (p -> q)",
        "p -> !!p",
        "!(p & !p)",
        "(p -> q) -> (!q -> !p)",
        "!!!p <-> !p",
        "!(p || q) <-> !p && !q",
        "!p || !q -> !(p && q)",
    ]),
    "associativity": (BOTH, [
        "p && (q && r) -> (p && q) && r",
        "(p && q) && r -> p && (q && r)",
        "p & (q & r) -> (p & q) & r",
        "(p & q) & r -> p & (q & r)",
        "p || (q || r) -> (p || q) || r",
        "(p || q) || r -> p || (q || r)",
    ]),
    "equivalence": (BOTH, [
        "(p <-> q) & (q <-> r) -> (p <-> r)",
        "p <-> p",
        "(p <-> q) -> (q <-> p)",
        "(p <-> q) -> (p -> q)",
        "(p <-> q) -> (p & r <-> q & r)",
        "(p <-> q) -> ((p -> r) <-> (q -> r))",
        "(p <-> q) -> ((r -> p) <-> (r -> q))",
        "(p <-> q) -> (p && r <-> q && r)",
        "(p <-> q) -> (p || r <-> q || r)",
    ]),
    "distributivity": (BOTH, [
        "p & (q || r) <-> (p & q) || (p & r)",
        "p & (q && r) <-> (p & q) && (p & r)",
        "p && (q || r) <-> (p && q) || (p && r)",
        "p || (q && r) <-> (p || q) && (p || r)",
        "(p || q -> r) <-> (p -> r) && (q -> r)",
        "(p -> q && r) <-> (p -> q) && (p -> r)",
        "(p && q -> r) <-> (p -> r) || (q -> r)",
        "(p -> q || r) <-> (p -> q) || (p -> r)",
    ]),
    "delta_operator": (BOTH, [
        "^p <-> ^(p & p)",
        "^p -> p",
        "^p || !^p",
    ]),
    "lukasiewicz": (LUK, [
        "!!p <-> p",
        "((p -> q) -> q) -> ((q -> p) -> p)",
        "(!q -> !p) -> (p -> q)",
        "(p -> q) <-> (!q -> !p)",
        "p || q <-> ((p -> q) -> q)",
        "p & q <-> !(!p | !q)",
        "p | q <-> (!p -> q)",
        "(p -> q) <-> !(p & !q)",
        "p | !p",
        "!!p -> p",
        "p && q <-> !(!p || !q)",
        "p || q <-> !(!p && !q)",
    ]),
    "godel": (GOEDEL, [
        "p -> p & p",
        "p & q <-> p && q",
        "(p -> (q -> r)) -> ((p -> q) -> (p -> r))",
        "!p || !!p",
        "(p -> !p) -> !p",
    ]),
}


def hajek_corpus() -> list[TautologyCase]:
    cases = []
    for batch, (logics, texts) in _HAJEK.items():
        for i, text in enumerate(texts, start=1):
            cases.append(TautologyCase(batch, i, parse_formula(text), logics))
    return cases


BOOLEAN_EXAMPLE = "(p -> q) -> ((!p -> q) -> q)"


def boolean_example() -> Formula:
    """Classically valid, but not valid in either logic without Boolean atoms."""
    return parse_formula(BOOLEAN_EXAMPLE)


def stress_sentences(count: int) -> tuple[SimpleSentence, list[SimpleSentence]]:
    """The Boolean example queried against many-interval sets.

    The query set holds ``(1/(k+1), 1/k)`` for ``k = 2..count+1`` plus
    ``[1/2, 1]``; each atom ranges over ``(1-1/k, 1-1/(k+1))`` for the same
    ``k`` plus ``[0, 0]``.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    ks = range(2, count + 2)
    query_set = IntervalSet(
        [Interval(Fraction(1, k + 1), Fraction(1, k), True, True) for k in ks] + [Interval(Fraction(1, 2), 1)]
    )
    atom_set = IntervalSet(
        [Interval(1 - Fraction(1, k), 1 - Fraction(1, k + 1), True, True) for k in ks] + [Interval.point(0)]
    )
    sigma = boolean_example()
    theory = [SimpleSentence(Atom("p"), atom_set), SimpleSentence(Atom("q"), atom_set)]
    return SimpleSentence(sigma, query_set), theory


def write_fixtures(directory: str | Path) -> list[Path]:
    """Write one theory file per tautology case, named ``<batch>_<index>.rvl``."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for case in hajek_corpus():
        logic = Logic.LUKASIEWICZ if Logic.LUKASIEWICZ in case.logics else Logic.GOEDEL
        holds = " and ".join(sorted(l.value for l in case.logics))
        text = format_theory(
            Theory(logic, []),
            [SimpleSentence(case.formula, IntervalSet.point(1))],
            comment=f"{case.name}: tautology of {holds} logic",
        )
        path = out / f"{case.name}.rvl"
        path.write_text(text, encoding="utf-8")
        written.append(path)
    return written


@dataclass(frozen=True)
class EntailmentCase:
    name: str
    logic: Logic
    theory: tuple[SimpleSentence, ...]
    query: SimpleSentence
    entailed: bool


def boolean_cases() -> list[EntailmentCase]:
    """The classically valid example against Boolean and partial restrictions of its atoms."""
    sigma = boolean_example()
    p, q = Atom("p"), Atom("q")
    boolean = IntervalSet.points([0, 1])
    one = IntervalSet.point(1)
    half = IntervalSet([Interval(Fraction(1, 2), 1)])
    cases = []
    for logic in Logic:
        tag = logic.value
        cases.append(EntailmentCase(f"{tag}/unrestricted", logic, (), SimpleSentence(sigma, one), False))
        cases.append(EntailmentCase(
            f"{tag}/both-boolean", logic,
            (SimpleSentence(p, boolean), SimpleSentence(q, boolean)), SimpleSentence(sigma, one), True))
        for atom in (p, q):
            cases.append(EntailmentCase(
                f"{tag}/{atom.name}-boolean", logic, (SimpleSentence(atom, boolean),), SimpleSentence(sigma, one), True))
    cases.append(EntailmentCase("lukasiewicz/at-least-half", Logic.LUKASIEWICZ, (), SimpleSentence(sigma, half), True))
    cases.append(EntailmentCase("goedel/at-least-half", Logic.GOEDEL, (), SimpleSentence(sigma, half), False))
    for t in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
        allowed = IntervalSet([Interval.point(0), Interval(t, 1)])
        target = SimpleSentence(sigma, IntervalSet([Interval(t, 1)]))
        for atom in (p, q):
            cases.append(EntailmentCase(
                f"goedel/{atom.name}-zero-or-above-{t}", Logic.GOEDEL, (SimpleSentence(atom, allowed),), target, True))
    return cases


@dataclass(frozen=True)
class KSatCase:
    name: str
    k: int
    theory: Theory
    satisfiable: bool


KSAT_CONFIGURATIONS = (
    ("goedel", Logic.GOEDEL, False, False, False),
    ("goedel-drop", Logic.GOEDEL, True, False, True),
    ("lukasiewicz", Logic.LUKASIEWICZ, False, False, True),
    ("lukasiewicz-constrained", Logic.LUKASIEWICZ, False, True, False),
    ("lukasiewicz-constrained-drop", Logic.LUKASIEWICZ, True, True, True),
)


def ksat_cases(min_k: int = 3, max_k: int = 6, dropped: int = 0) -> list[KSatCase]:
    """The five configurations per k with their expected satisfiability."""
    cases = []
    for k in range(min_k, max_k + 1):
        for name, logic, drop, constrain, sat in KSAT_CONFIGURATIONS:
            theory = gen_ksat(k, dropped if drop else None, constrain, logic)
            cases.append(KSatCase(f"k={k}/{name}", k, theory, sat))
    return cases
