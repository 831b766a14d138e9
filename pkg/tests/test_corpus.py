import itertools
from collections import Counter
from fractions import Fraction
from pathlib import Path

import pytest

from rvlogic.corpus import (
    boolean_cases,
    gen_ksat,
    hajek_corpus,
    ksat_cases,
    ksat_clauses,
    stress_sentences,
    write_fixtures,
)
from rvlogic.decide import check_entails, check_sat
from rvlogic.formula import Atom, atoms, parse_formula
from rvlogic.intervals import Interval, IntervalSet
from rvlogic.semantics import Logic, evaluate
from rvlogic.theory import SimpleSentence, Theory, parse_theory

L, G = Logic.LUKASIEWICZ, Logic.GOEDEL
FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def test_3sat_clauses():
    clauses = ksat_clauses(3)
    assert len(clauses) == 8
    assert clauses[0] == parse_formula("x1 | x2 | x3")
    assert clauses[1] == parse_formula("!x1 | x2 | x3")
    assert clauses[-1] == parse_formula("!x1 | !x2 | !x3")


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_clause_set_is_the_cnf_expansion(k):
    clauses = gen_ksat(k).sentences
    assert len(clauses) == 2**k
    # every sign pattern appears once: each Boolean assignment falsifies exactly one clause
    names = [f"x{i + 1}" for i in range(k)]
    for bits in range(2**k):
        m = {n: Fraction((bits >> i) & 1) for i, n in enumerate(names)}
        falsified = [s for s in clauses if evaluate(G, s.formula, m) == 0]
        assert len(falsified) == 1


def test_drop_and_constrain():
    assert len(gen_ksat(3, dropped=0).sentences) == 7
    assert len(gen_ksat(4).sentences) == 16
    constrained = gen_ksat(3, constrain=True).sentences
    assert len(constrained) == 11
    assert constrained[-1].formula == Atom("x3")
    assert constrained[-1].values == IntervalSet([Interval(0, Fraction(1, 3), False, True), Interval(Fraction(2, 3), 1, True, False)])
    with pytest.raises(ValueError):
        gen_ksat(3, dropped=8)
    with pytest.raises(ValueError):
        gen_ksat(1)


@pytest.mark.parametrize("dropped", range(8))
def test_any_single_drop_makes_3sat_satisfiable(dropped):
    assert check_sat(gen_ksat(3, dropped, logic=G)).satisfiable
    assert check_sat(gen_ksat(3, dropped, constrain=True, logic=L)).satisfiable


def test_3sat_without_drop():
    assert not check_sat(gen_ksat(3, logic=G)).satisfiable
    assert not check_sat(gen_ksat(3, constrain=True, logic=L)).satisfiable
    assert check_sat(gen_ksat(3, logic=L)).satisfiable


def test_ksat_case_grid():
    cases = ksat_cases(3, 4)
    assert len(cases) == 10
    assert [c.satisfiable for c in cases[:5]] == [False, True, True, False, True]


def test_hajek_counts():
    cases = hajek_corpus()
    assert len(cases) == 82
    sizes = Counter(c.batch for c in cases)
    assert sizes == {
        "axioms": 8, "implication": 3, "conjunction": 6, "weak_conjunction": 7, "weak_disjunction": 7,
        "negation": 8, "associativity": 6, "equivalence": 9, "distributivity": 8, "delta_operator": 3,
        "lukasiewicz": 12, "godel": 5,
    }
    assert all(c.logics == {L} for c in cases if c.batch == "lukasiewicz")
    assert all(c.logics == {G} for c in cases if c.batch == "godel")
    assert all(c.logics == {L, G} for c in cases if c.batch not in ("lukasiewicz", "godel"))
    assert len({c.formula for c in cases}) == 82


def test_hajek_exemplars_are_present():
    formulas = {c.formula for c in hajek_corpus()}
    for text in ["(p -> q) -> ((q -> r) -> (p -> r))", "p -> (!p -> q)", "!!p <-> p", "p -> (p & p)"]:
        f = parse_formula(text)
        assert f in formulas or any(atoms(g) == atoms(f) and str(g).replace(" ", "") == text.replace(" ", "") for g in formulas), text


def test_hajek_tautologies_hold_on_a_grid():
    grid = [Fraction(i, 4) for i in range(5)]
    for case in hajek_corpus():
        names = sorted(atoms(case.formula))
        for logic in Logic:
            holds = all(
                evaluate(logic, case.formula, dict(zip(names, vals))) == 1
                for vals in itertools.product(grid, repeat=len(names))
            )
            if logic in case.logics:
                assert holds, (case.name, logic)


def test_stress_sentences():
    query, theory = stress_sentences(3)
    raw = [Interval.open(Fraction(1, 3), Fraction(1, 2)), Interval.open(Fraction(1, 4), Fraction(1, 3)),
           Interval.open(Fraction(1, 5), Fraction(1, 4)), Interval(Fraction(1, 2), 1)]
    assert query.values == IntervalSet(raw)
    assert all(len(s.values) == 4 for s in theory)
    assert Fraction(0) in theory[0].values and Fraction(1, 2) not in theory[0].values
    with pytest.raises(ValueError):
        stress_sentences(0)


def test_stress_sizes():
    query, theory = stress_sentences(1000)
    assert len(theory[0].values) == 1001
    # (1/3,1/2) and [1/2,1] touch, so the normalized query holds one interval fewer
    assert len(query.values) == 1000


@pytest.mark.parametrize("logic", list(Logic))
def test_stress_query_cut_below_one_is_refuted(logic):
    query, theory = stress_sentences(200)
    cut = SimpleSentence(query.formula, query.values & IntervalSet([Interval(0, Fraction(9, 10), False, True)]))
    r = check_entails(Theory(logic, theory), cut)
    assert not r.entailed
    assert all(s.satisfied_by(logic, r.countermodel) for s in theory)
    assert not cut.satisfied_by(logic, r.countermodel)


def test_boolean_cases():
    cases = boolean_cases()
    assert len(cases) == 16
    refuted = {c.name for c in cases if not c.entailed}
    assert refuted == {"lukasiewicz/unrestricted", "goedel/unrestricted", "goedel/at-least-half"}
    for c in cases:
        r = check_entails(Theory(c.logic, list(c.theory)), c.query)
        assert r.entailed == c.entailed, c.name


def test_write_fixtures(tmp_path):
    paths = write_fixtures(tmp_path)
    assert len(paths) == 82
    assert sorted(p.name for p in paths)[0] == "associativity_1.rvl"
    tf = parse_theory(paths[0].read_text())
    assert tf.theory.sentences == () and len(tf.query) == 1


def test_shipped_fixtures_match_the_corpus(tmp_path):
    write_fixtures(tmp_path)
    shipped = sorted((FIXTURES / "hajek").glob("*.rvl"))
    assert [p.name for p in shipped] == sorted(p.name for p in tmp_path.iterdir())
    for p in shipped:
        assert p.read_text() == (tmp_path / p.name).read_text()
