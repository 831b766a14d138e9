"""Satisfiability and entailment verdicts with independently validated witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Sequence

from .formula import atoms
from .milp import MilpProblem, encode_entailment, encode_satisfiability
from .semantics import evaluate_all
from .solver import Feasible, SolveStats, SolverError, solve_milp
from .theory import SimpleSentence, Theory

if TYPE_CHECKING:
    from .finite import Derivation, FiniteEngine, FiniteSentence, Refutation


@dataclass
class SatResult:
    satisfiable: bool
    model: dict[str, Fraction] | None
    stats: SolveStats
    problem: MilpProblem = field(repr=False)


@dataclass
class ComponentVerdict:
    query: SimpleSentence
    entailed: bool
    countermodel: dict[str, Fraction] | None
    stats: SolveStats


@dataclass
class EntailResult:
    components: list[ComponentVerdict]

    @property
    def entailed(self) -> bool:
        return all(c.entailed for c in self.components)

    @property
    def countermodel(self) -> dict[str, Fraction] | None:
        for c in self.components:
            if not c.entailed:
                return c.countermodel
        return None


def _model(problem: MilpProblem, assignment: dict[str, Fraction], names: set[str]) -> dict[str, Fraction]:
    atom_vars = problem.atom_vars
    return {a: assignment[atom_vars[a]] for a in sorted(names)}


def validate_model(theory: Theory, model: dict[str, Fraction], problem: MilpProblem | None = None,
                   assignment: dict[str, Fraction] | None = None) -> None:
    """Raise unless ``model`` satisfies ``theory`` and reproduces the solver's truth values."""
    values = evaluate_all(theory.logic, [s.formula for s in theory.sentences], model)
    for s in theory.sentences:
        if values[s.formula] not in s.values:
            raise SolverError(f"witness fails {s}: value {values[s.formula]}")
    if problem is not None and assignment is not None:
        computed = evaluate_all(theory.logic, list(problem.formula_vars), model)
        for f, var in problem.formula_vars.items():
            if computed[f] != assignment[var]:
                raise SolverError(f"solver value of {var} disagrees with evaluation")


def check_sat(theory: Theory, **solver_options) -> SatResult:
    problem = encode_satisfiability(theory)
    result = solve_milp(problem, **solver_options)
    names = set().union(*(atoms(s.formula) for s in theory.sentences)) if theory.sentences else set()
    if isinstance(result, Feasible):
        model = _model(problem, result.assignment, names)
        validate_model(theory, model, problem, result.assignment)
        return SatResult(True, model, result.stats, problem)
    return SatResult(False, None, result.stats, problem)


def check_entails(
    theory: Theory,
    query: SimpleSentence | Sequence[SimpleSentence],
    complement_mode: str = "intervals",
    **solver_options,
) -> EntailResult:
    """Decide ``theory |= query`` one simple sentence at a time."""
    queries = [query] if isinstance(query, SimpleSentence) else list(query)
    out = []
    for q in queries:
        problem = encode_entailment(theory, q, complement_mode)
        result = solve_milp(problem, **solver_options)
        if isinstance(result, Feasible):
            names = set(atoms(q.formula)).union(*(atoms(s.formula) for s in theory.sentences))
            model = _model(problem, result.assignment, names)
            validate_model(theory, model, problem, result.assignment)
            value = evaluate_all(theory.logic, [q.formula], model)[q.formula]
            if value in q.values:
                raise SolverError(f"countermodel satisfies the query {q}")
            out.append(ComponentVerdict(q, False, model, result.stats))
        else:
            out.append(ComponentVerdict(q, True, None, result.stats))
    return EntailResult(out)


@dataclass
class ProofResult:
    proved: bool
    derivation: "Derivation | None"
    refutation: "Refutation | None"
    premises: list
    query: "FiniteSentence"
    engine: "FiniteEngine"


def prove_on_grid(theory: Theory, query: Sequence[SimpleSentence], denominator: int,
                  max_tuples: int | None = None) -> ProofResult:
    """Run the canonical derivation over the grid ``{0, 1/d, ..., 1}``.

    The verdict is checked against brute-force enumeration; a disagreement
    is an internal error.
    """
    from .finite import DEFAULT_MAX_TUPLES, FiniteEngine, Refutation, from_product, from_simple

    engine = FiniteEngine(theory.logic, denominator, max_tuples or DEFAULT_MAX_TUPLES)
    premises = [from_simple(s.formula, s.values, engine.domain) for s in theory.sentences]
    target = from_product([s.formula for s in query], [s.values for s in query], engine.domain)
    outcome = engine.canonical_derivation(premises, target)
    proved = not isinstance(outcome, Refutation)
    if proved != engine.model_entails(premises, target):
        raise SolverError("canonical derivation disagrees with grid enumeration")
    if proved:
        if not engine.replay(outcome, target):
            raise SolverError("derivation does not replay")
        return ProofResult(True, outcome, None, premises, target, engine)
    validate_model(theory, outcome.model)
    if engine.satisfies(target, outcome.model):
        raise SolverError("grid countermodel satisfies the query")
    return ProofResult(False, None, outcome, premises, target, engine)
