import itertools
import random
from fractions import Fraction

import pytest

from helpers import random_formula
from rvlogic.formula import Atom, Binary, Connective, Unary, Weighted, parse_formula, subformula_closure
from rvlogic.intervals import parse_interval_set
from rvlogic.milp import (
    DELTA,
    EncodingError,
    LinearExpr,
    _guarded,
    encode_connective_constraints,
    encode_entailment,
    encode_satisfiability,
    rewrite,
)
from rvlogic.semantics import Logic, connective_value, evaluate
from rvlogic.solver import solve_milp
from rvlogic.theory import Theory, sentence

L, G = Logic.LUKASIEWICZ, Logic.GOEDEL
Q = Fraction
x, y = Atom("x"), Atom("y")
GRID = [Q(i, 4) for i in range(5)]
SMALL = Q(1, 100)


def test_goedel_min_pattern_size():
    enc = encode_connective_constraints(G, subformula_closure([parse_formula("x && y")]))
    assert len(enc.constraints) == 6
    assert len(enc.booleans) == 1


def test_involution_is_a_single_equation():
    enc = encode_connective_constraints(L, subformula_closure([Unary(Connective.INV, x)]))
    assert len(enc.constraints) == 1 and enc.constraints[0].sense == "=="
    assert enc.booleans == []
    c = enc.constraints[0]
    assert c.holds({"s0": Q(1, 3), "s1": Q(2, 3)}) and not c.holds({"s0": Q(1, 3), "s1": Q(1, 3)})


def test_unrewritten_connectives_are_rejected():
    with pytest.raises(EncodingError):
        encode_connective_constraints(L, subformula_closure([parse_formula("!x")]))
    with pytest.raises(EncodingError):
        encode_connective_constraints(G, subformula_closure([parse_formula("x <-> y")]))
    with pytest.raises(EncodingError):
        encode_connective_constraints(G, subformula_closure([parse_formula("wor[1,1](x, y)")]))


PRIMITIVES = [
    (logic, f)
    for logic in Logic
    for f in [
        Binary(Connective.STRONG_AND, x, y),
        Binary(Connective.WEAK_AND, x, y),
        Binary(Connective.STRONG_OR, x, y),
        Binary(Connective.WEAK_OR, x, y),
        Binary(Connective.IMPLIES, x, y),
        Unary(Connective.INV, x),
        Unary(Connective.DELTA, x),
    ]
] + [
    (L, Weighted(Connective.STRONG_OR, 2, 1, x, y)),
    (L, Weighted(Connective.STRONG_AND, Q(1, 2), 3, x, y)),
    (L, Weighted(Connective.STRONG_OR, 0, Q(3, 2), x, y)),
]


@pytest.mark.parametrize("logic, f", PRIMITIVES, ids=lambda v: str(v))
def test_branches_match_the_truth_function(logic, f):
    """On a grid, some boolean choice satisfies the rows iff z is the connective's value."""
    enc = encode_connective_constraints(logic, subformula_closure([f, x, y]))
    var = enc.variables
    for a, b in itertools.product(GRID, repeat=2):
        truth = evaluate(logic, f, {"x": a, "y": b})
        for z in sorted(set(GRID) | {truth}):
            base = {var[x]: a, var[y]: b, var[f]: z, DELTA: SMALL}
            ok = any(
                all(c.holds({**base, **dict(zip(enc.booleans, bits))}) for c in enc.constraints)
                for bits in itertools.product((0, 1), repeat=len(enc.booleans))
            )
            assert ok == (z == truth), (a, b, z)


def test_lukasiewicz_strong_and_uses_one_boolean():
    enc = encode_connective_constraints(L, subformula_closure([parse_formula("x & y")]))
    assert len(enc.booleans) == 1
    (bool_name,) = enc.booleans
    for a, b in itertools.product(GRID, repeat=2):
        value = connective_value(L, Connective.STRONG_AND, (a, b))
        base = {"s0": a, "s1": b, "s2": value, DELTA: SMALL}
        branch = 1 if a + b - 1 >= 0 else 0
        assert all(c.holds({**base, bool_name: branch}) for c in enc.constraints)


def test_rewrite_preserves_values():
    rng = random.Random(9)
    for logic in Logic:
        for _ in range(200):
            f = random_formula(rng, ["a", "b"], 4, logic, weighted=logic is L)
            g = rewrite(logic, f)
            for a, b in itertools.product(GRID, repeat=2):
                m = {"a": a, "b": b}
                assert evaluate(logic, g, m) == evaluate(logic, f, m)


def _sat(theory):
    return solve_milp(encode_satisfiability(theory))


def test_point_sentence():
    r = _sat(Theory(L, [sentence("x", "[1,1]")]))
    assert r.feasible and r.objective == 1
    assert r.assignment["s0"] == 1


def test_open_sentence_needs_a_gap():
    r = _sat(Theory(L, [sentence("x", "(0,1)")]))
    assert r.feasible and r.objective > 0
    assert 0 < r.assignment["s0"] < 1


def test_empty_intersection_is_infeasible():
    theory = Theory(L, [sentence("x", "[0,0.2)"), sentence("x", "(0.8,1]")])
    problem = encode_satisfiability(theory)
    assert problem.infeasible_reason is not None
    assert not solve_milp(problem).feasible


def test_sentences_on_one_formula_share_a_group():
    problem = encode_satisfiability(Theory(G, [sentence("x", "[0,1/2]"), sentence("x", "[1/4,1]"), sentence("y", "[0,1]")]))
    assert len(problem.groups) == 1
    assert problem.groups[0].intervals == parse_interval_set("[1/4,1/2]").intervals


@pytest.mark.parametrize("mode", ["intervals", "sides"])
def test_entailment_examples(mode):
    empty = Theory(L, [])
    assert not solve_milp(encode_entailment(empty, sentence("x", "[0,1]"), mode)).feasible
    r = solve_milp(encode_entailment(empty, sentence("x", "[1,1]"), mode))
    assert r.feasible and r.assignment["s0"] < 1
    sigma = "(p -> q) -> ((!p -> q) -> q)"
    assert not solve_milp(encode_entailment(empty, sentence(sigma, "[0.5,1]"), mode)).feasible
    assert solve_milp(encode_entailment(empty, sentence(sigma, "[1,1]"), mode)).feasible


def test_sides_mode_adds_one_boolean_per_interval():
    q = sentence("x", "[0.2,0.3], (0.5,1]")
    problem = encode_entailment(Theory(L, []), q, "sides")
    assert len(problem.booleans) == 2
    assert not problem.groups
    # x = 0.4 lies right of the first interval and left of the second
    a = {"s0": Q(2, 5), DELTA: Q(1, 20), "b0": 0, "b1": 1}
    assert problem.check(a) == []
    assert problem.check({**a, "s0": Q(1, 4)}) != []


def test_unknown_complement_mode():
    with pytest.raises(EncodingError):
        encode_entailment(Theory(L, []), sentence("x", "[1,1]"), "middle")


def test_big_m_rows_are_vacuous_when_the_guard_fails():
    rng = random.Random(4)
    theory = Theory(G, [sentence("x -> y", "(0,1/2], [3/4,1]"), sentence("^(x || !y)", "[1,1]")])
    problem = encode_satisfiability(theory)
    box = problem.box()
    guarded = [c for c in problem.constraints if c.guard is not None]
    assert guarded
    for _ in range(200):
        a = {v: Q(rng.randint(0, 12), 12) * (hi - lo) + lo for v, (lo, hi) in box.items()}
        for c in guarded:
            b, value = c.guard
            a[b] = 1 - value
            parts = [c.expr] if c.sense == "<=" else [c.expr, -c.expr]
            for e in parts:
                assert _guarded(e, c.guard, box).evaluate(a) <= 0


def test_lp_export():
    problem = encode_satisfiability(Theory(G, [sentence("x || y", "(0.5,1]")]))
    text = problem.to_lp_format()
    assert text.startswith("\\")
    for section in ("Maximize", "Subject To", "Bounds", "Binary", "End"):
        assert section in text
    assert " obj: delta" in text


def test_linear_expr_arithmetic():
    e = LinearExpr.var("a", 2) - LinearExpr.var("b") + 1
    assert e.evaluate({"a": Q(1, 2), "b": Q(1, 4)}) == Q(7, 4)
    assert (e - e).coeffs == {}
    assert e.bounds({"a": (Q(0), Q(1)), "b": (Q(0), Q(1))}) == (0, 3)
    assert (LinearExpr.var("a") * 3).coeffs == {"a": 3}
