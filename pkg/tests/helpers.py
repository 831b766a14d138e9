"""Random instance generators shared by the property and acceptance tests."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from rvlogic.finite import FiniteEngine, FiniteSentence
from rvlogic.formula import Atom, Binary, Connective, Constant, Unary, Weighted, subformula_closure
from rvlogic.intervals import Interval, IntervalSet
from rvlogic.semantics import Logic
from rvlogic.theory import SimpleSentence, Theory

BINARIES = [
    Connective.STRONG_AND,
    Connective.WEAK_AND,
    Connective.STRONG_OR,
    Connective.WEAK_OR,
    Connective.IMPLIES,
    Connective.EQUIV,
]
UNARIES = [Connective.NOT, Connective.INV, Connective.DELTA]


def random_rational(rng: random.Random, denominators=(1, 2, 3, 4, 5, 6, 8, 10)) -> Fraction:
    q = rng.choice(denominators)
    return Fraction(rng.randint(0, q), q)


def random_interval(rng: random.Random) -> Interval:
    a, b = sorted((random_rational(rng), random_rational(rng)))
    if a == b:
        return Interval.point(a)
    return Interval(a, b, rng.random() < 0.5, rng.random() < 0.5)


def random_interval_set(rng: random.Random, max_intervals: int = 4) -> IntervalSet:
    return IntervalSet(random_interval(rng) for _ in range(rng.randint(0, max_intervals)))


def random_formula(rng: random.Random, names, depth: int, logic: Logic, weighted: bool = False,
                   denominator: int | None = None):
    """A random formula; weights are integers so every grid stays closed."""
    if depth == 0 or rng.random() < 0.3:
        if denominator and rng.random() < 0.1:
            return Constant(Fraction(rng.randint(0, denominator), denominator))
        return Atom(rng.choice(names))
    if rng.random() < 0.25:
        return Unary(rng.choice(UNARIES), random_formula(rng, names, depth - 1, logic, weighted, denominator))
    left = random_formula(rng, names, depth - 1, logic, weighted, denominator)
    right = random_formula(rng, names, depth - 1, logic, weighted, denominator)
    if weighted and logic is Logic.LUKASIEWICZ and rng.random() < 0.4:
        conn = rng.choice([Connective.STRONG_AND, Connective.STRONG_OR])
        return Weighted(conn, rng.randint(0, 3), rng.randint(0, 3), left, right)
    return Binary(rng.choice(BINARIES), left, right)


def random_tuples(rng: random.Random, size: int, arity: int, density: float) -> frozenset:
    return frozenset(t for t in itertools.product(range(size), repeat=arity) if rng.random() < density)


def closure_size(sentences) -> int:
    return len(subformula_closure(c for s in sentences for c in s.components))


def random_finite_instance(rng: random.Random, max_cells: int = 20_000):
    """Theory and query over a small grid, with entailed and non-entailed cases mixed.

    Returns ``(engine, theory, query)``.  The query set is the set of tuples
    realized by models of the theory, usually with one tuple removed and
    a few random tuples added.
    """
    while True:
        logic = rng.choice(list(Logic))
        d = rng.randint(1, 4)
        engine = FiniteEngine(logic, d)
        names = ["A", "B", "C"][: rng.randint(1, 3)]
        weighted = logic is Logic.LUKASIEWICZ and rng.random() < 0.5
        theory = []
        for _ in range(rng.randint(0, 3)):
            comps = []
            for _ in range(rng.randint(1, 2)):
                f = random_formula(rng, names, 2, logic, weighted, d)
                if f not in comps:
                    comps.append(f)
            theory.append(FiniteSentence(comps, random_tuples(rng, engine.domain.size, len(comps), 0.8)))
        query_components = []
        for _ in range(rng.choice([1, 1, 2])):
            f = random_formula(rng, names, 2, logic, weighted, d)
            if f not in query_components:
                query_components.append(f)
        probe = FiniteSentence(query_components, frozenset())
        if engine.domain.size ** closure_size([*theory, probe]) > max_cells:
            continue
        realized = {engine.value_tuple(query_components, m) for m in engine.models(theory, names)}
        tuples = set(realized)
        if rng.random() < 0.6 and tuples:
            tuples.discard(rng.choice(sorted(tuples)))
        tuples |= random_tuples(rng, engine.domain.size, len(query_components), 0.1)
        return engine, theory, FiniteSentence(query_components, frozenset(tuples))


def grid_restricted(rng: random.Random, logic: Logic, d: int, max_cells: int = 20_000):
    """Atoms pinned to grid points, so the solver and the grid see the same models."""
    points = IntervalSet.points(Fraction(i, d) for i in range(d + 1))
    atoms = ["a", "b"]
    while True:
        sentences = [SimpleSentence(Atom(a), points) for a in atoms]
        for _ in range(rng.randint(0, 2)):
            f = random_formula(rng, atoms, 2, logic, weighted=True, denominator=d)
            sentences.append(SimpleSentence(f, random_interval_set(rng, 2)))
        f = random_formula(rng, atoms, 2, logic, weighted=True, denominator=d)
        query = SimpleSentence(f, random_interval_set(rng, 2))
        closure = subformula_closure([s.formula for s in [*sentences, query]])
        if (d + 1) ** len(closure) <= max_cells:
            return Theory(logic, sentences), query
