"""Acceptance runs; each test records one PASS/FAIL line for the terminal summary."""

import random
import time
from fractions import Fraction

from helpers import grid_restricted, random_finite_instance, random_formula, random_interval_set, random_tuples
from rvlogic.decide import check_sat
from rvlogic.finite import Derivation, FiniteEngine, FiniteSentence, Rule, from_simple
from rvlogic.formula import Weighted, atoms, subformula_closure
from rvlogic.intervals import IntervalSet
from rvlogic.semantics import Logic
from rvlogic.suites import run_boolean, run_hajek, run_ksat, run_stress
from rvlogic.theory import Theory


def _run_suite(results):
    start = time.perf_counter()
    results = list(results)
    return results, time.perf_counter() - start


def test_hajek_suite(criterion):
    results, elapsed = _run_suite(run_hajek())
    bad = [r.name for r in results if not r.ok]
    ok = len(results) == 164 and not bad and elapsed < 60
    assert criterion(1, "Hajek corpus", ok, f"{len(results)} runs over 82 cases, {len(bad)} mismatches, {elapsed:.1f}s < 60s"), bad


def test_ksat_grid(criterion):
    results, elapsed = _run_suite(run_ksat(3, 6))
    bad = [r.name for r in results if not r.ok]
    ok = len(results) == 20 and not bad and elapsed < 300
    assert criterion(2, "k-SAT grid k=3..6", ok, f"{len(results)} runs, {len(bad)} mismatches, {elapsed:.1f}s < 300s"), bad


def test_boolean_example(criterion):
    results, elapsed = _run_suite(run_boolean())
    by_name = {r.name: r for r in results}
    parts = {
        "a": ["lukasiewicz/unrestricted", "goedel/unrestricted"],
        "b": ["lukasiewicz/both-boolean", "goedel/both-boolean"],
        "c": [f"{logic}/{atom}-boolean" for logic in ("lukasiewicz", "goedel") for atom in "pq"],
        "d": ["lukasiewicz/at-least-half"],
        "e": [f"goedel/{atom}-zero-or-above-{t}" for t in ("1/4", "1/2", "3/4") for atom in "pq"],
    }
    failed = [part for part, names in parts.items() if not all(by_name[n].ok for n in names)]
    ok = not failed and all(r.ok for r in results)
    detail = f"parts a-e over {len(results)} runs, failing parts: {','.join(failed) or 'none'}"
    assert criterion(3, "Boolean example", ok, detail), failed


def test_stress_1000(criterion):
    results, elapsed = _run_suite(run_stress(1000))
    verdicts = {r.name: r.got for r in results}
    ok = len(results) == 2 and all(r.ok for r in results) and elapsed < 120
    assert criterion(4, "stress 1000 intervals", ok, f"{verdicts}, {elapsed:.1f}s < 120s"), verdicts


def test_canonical_derivation_matches_enumeration(criterion):
    rng = random.Random(2024)
    n, mismatches, entailed, weighted = 520, 0, 0, 0
    for _ in range(n):
        engine, theory, query = random_finite_instance(rng)
        outcome = engine.canonical_derivation(theory, query)
        truth = engine.model_entails(theory, query)
        entailed += truth
        weighted += any(isinstance(g, Weighted) for s in [*theory, query] for g in subformula_closure(s.components))
        if isinstance(outcome, Derivation) != truth:
            mismatches += 1
        elif truth and not engine.replay(outcome, query):
            mismatches += 1
    ok = mismatches == 0 and n >= 500
    detail = f"{n} instances, {entailed} entailed, {weighted} weighted, {mismatches} mismatches"
    assert criterion(5, "canonical derivation vs enumeration", ok, detail)


def test_solver_matches_grid_enumeration(criterion):
    rng = random.Random(77)
    n, mismatches, sat = 240, 0, 0
    for i in range(n):
        logic = list(Logic)[i % 2]
        d = rng.randint(1, 4)
        theory, query = grid_restricted(rng, logic, d)
        full = Theory(logic, [*theory.sentences, query])
        engine = FiniteEngine(logic, d)
        premises = [from_simple(s.formula, s.values, engine.domain) for s in full.sentences]
        expected = engine.satisfiable(premises)
        got = check_sat(full).satisfiable
        sat += got
        mismatches += got != expected
    ok = mismatches == 0 and n >= 200
    assert criterion(6, "solver vs grid enumeration", ok, f"{n} theories, {sat} SAT, {mismatches} mismatches")


def _rule_applications(rng: random.Random, engine: FiniteEngine, comps, names):
    size, k = engine.domain.size, len(comps)
    s = FiniteSentence(comps, random_tuples(rng, size, k, 0.5))
    t = FiniteSentence(comps, random_tuples(rng, size, k, 0.5))
    perm = list(range(k))
    rng.shuffle(perm)
    yield [], engine.apply_rule(Rule.AXIOM, [], formula=comps[-1])
    yield [s], engine.apply_rule(Rule.PERM, [s], perm=tuple(perm))
    yield [s, t], engine.apply_rule(Rule.INTERSECT, [s, t])
    yield [s], engine.apply_rule(Rule.OPERATORS, [s])
    yield [s], engine.apply_rule(Rule.SUPERSET, [s], target=FiniteSentence(comps, s.tuples | t.tuples))
    if k > 1:
        yield [s], engine.apply_rule(Rule.PROJ, [s], r=rng.randint(1, k - 1))
    new = random_formula(rng, names, 1, engine.logic, denominator=engine.domain.denominator)
    if new not in comps and size ** (k + 1) <= 5000:
        yield [s], engine.apply_rule(Rule.ADD, [s], components=(new,))


def test_rule_soundness_and_minimization(criterion):
    rng = random.Random(99)
    names = ["a", "b"]
    instances = applications = violations = 0
    while instances < 120:
        logic = rng.choice(list(Logic))
        engine = FiniteEngine(logic, rng.randint(1, 3))
        f = random_formula(rng, names, 2, logic, weighted=True, denominator=engine.domain.denominator)
        comps = subformula_closure([f])
        if engine.domain.size ** len(comps) > 5000:
            continue
        instances += 1
        for premises, out in _rule_applications(rng, engine, comps, names):
            applications += 1
            scope = set(names) | set().union(*(atoms(c) for c in out.components))
            for m in engine.grid_models(scope):
                if all(engine.satisfies(p, m) for p in premises) and not engine.satisfies(out, m):
                    violations += 1
                    break
        # every tuple that survives Operators on a closure is realized by a grid model
        realized = engine.realized_tuples(comps)
        sample = FiniteSentence(comps, random_tuples(rng, engine.domain.size, len(comps), 0.5))
        if not engine.apply_rule(Rule.OPERATORS, [sample]).tuples <= realized:
            violations += 1
        if engine.apply_rule(Rule.OPERATORS, [engine.full(comps)]).tuples != realized:
            violations += 1
    ok = violations == 0
    detail = f"{instances} instances, {applications} rule applications, {violations} violations"
    assert criterion(7, "rule soundness and minimization", ok, detail)


def _probes(rng: random.Random, *sets: IntervalSet):
    points = {Fraction(0), Fraction(1)}
    for s in sets:
        for iv in s:
            points |= {iv.lower, iv.upper, (iv.lower + iv.upper) / 2}
    points |= {Fraction(rng.randint(0, 60), 60) for _ in range(5)}
    return points


def test_interval_algebra(criterion):
    rng = random.Random(5)
    n, violations = 1200, []
    full, empty = IntervalSet.full(), IntervalSet.empty()
    for i in range(n):
        a, b, c = (random_interval_set(rng) for _ in range(3))
        laws = {
            "involution": ~~a == a,
            "commutative": a & b == b & a,
            "associative": (a & b) & c == a & (b & c),
            "idempotent": a & a == a,
            "identity": a & full == a and a & empty == empty,
            "disjoint complement": a & ~a == empty,
        }
        for v in _probes(rng, a, b):
            laws[f"xor at {v}"] = (v in a) != (v in ~a)
            laws[f"meet at {v}"] = (v in a & b) == (v in a and v in b)
        violations += [(i, name) for name, holds in laws.items() if not holds]
    ok = not violations
    detail = f"{n} random sets, {len(violations)} violations"
    assert criterion(8, "interval algebra laws", ok, detail), violations[:5]
