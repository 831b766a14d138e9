"""Exhaustive execution of the axiom system over a truth-value grid.

Sentences are ``(σ1, ..., σk, S)`` with ``S`` an explicit set of index
vectors over the grid ``{0, 1/d, ..., 1}``.  The engine applies the
inference rules exactly, builds the canonical completeness derivation,
forms Boolean combinations, and enumerates grid models as ground truth.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .formula import (
    Atom,
    Constant,
    Formula,
    Unary,
    atoms,
    children,
    parse_formula,
    subformula_closure,
    to_text,
)
from .intervals import IntervalSet, contains
from .semantics import Logic, SemanticsError, connective_value, evaluate_all

DEFAULT_MAX_TUPLES = 500_000


class EngineError(ValueError):
    pass


class GridClosureError(EngineError):
    """A connective maps grid values off the grid."""


class SizeGuardError(EngineError):
    pass


class Rule(enum.Enum):
    AXIOM = "Axiom"
    PERM = "Perm"
    ADD = "Add"
    INTERSECT = "Intersect"
    PROJ = "Proj"
    SUPERSET = "Superset"
    OPERATORS = "Operators"


@dataclass(frozen=True)
class FiniteDomain:
    denominator: int

    def __post_init__(self):
        if self.denominator < 1:
            raise EngineError("grid denominator must be at least 1")

    @property
    def size(self) -> int:
        return self.denominator + 1

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(i, self.denominator) for i in range(self.size))

    def index(self, v: Fraction) -> int | None:
        scaled = v * self.denominator
        if scaled.denominator != 1 or not 0 <= scaled <= self.denominator:
            return None
        return int(scaled)

    def value(self, i: int) -> Fraction:
        return Fraction(i, self.denominator)


@dataclass(frozen=True)
class FiniteSentence:
    components: tuple[Formula, ...]
    tuples: frozenset

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "tuples", frozenset(self.tuples))
        if len(set(self.components)) != len(self.components):
            raise EngineError("sentence components must be pairwise distinct")
        k = len(self.components)
        for t in self.tuples:
            if len(t) != k:
                raise EngineError(f"tuple {t} has arity {len(t)}, expected {k}")

    @property
    def arity(self) -> int:
        return len(self.components)

    def __len__(self) -> int:
        return len(self.tuples)

    def describe(self, domain: FiniteDomain) -> str:
        comps = ", ".join(to_text(c) for c in self.components)
        return f"({comps}; {len(self.tuples)} of {domain.size ** self.arity} tuples)"


def from_simple(formula: Formula, values: IntervalSet, domain: FiniteDomain) -> FiniteSentence:
    return from_product([formula], [values], domain)


def from_product(components: Sequence[Formula], sets: Sequence[IntervalSet], domain: FiniteDomain) -> FiniteSentence:
    axes = [[i for i, v in enumerate(domain.values) if contains(s, v)] for s in sets]
    return FiniteSentence(tuple(components), frozenset(itertools.product(*axes)))


@dataclass(frozen=True)
class Step:
    rule: Rule
    inputs: tuple[int, ...]
    params: Mapping
    output: FiniteSentence


@dataclass
class Derivation:
    premises: list[FiniteSentence]
    steps: list[Step] = field(default_factory=list)

    @property
    def conclusion(self) -> FiniteSentence:
        return self.steps[-1].output if self.steps else self.premises[-1]

    def log_lines(self) -> list[str]:
        lines = []
        for step in self.steps:
            ins = ",".join(str(i) for i in step.inputs) or "-"
            line = f"rule={step.rule.value} in={ins} out-size={len(step.output)}"
            params = _encode_params(step)
            if params:
                line += " params=" + json.dumps(params, sort_keys=True)
            lines.append(line)
        return lines


@dataclass(frozen=True)
class Refutation:
    """A value tuple for the query's components that the theory allows but the query excludes."""

    values: tuple[Fraction, ...]
    model: dict[str, Fraction]


def _encode_params(step: Step) -> dict:
    p = step.params
    if step.rule is Rule.AXIOM:
        return {"formula": to_text(p["formula"])}
    if step.rule is Rule.PERM:
        return {"perm": list(p["perm"])}
    if step.rule is Rule.ADD:
        return {"add": [to_text(f) for f in p["components"]]}
    if step.rule is Rule.PROJ:
        return {"drop": p["r"]}
    if step.rule is Rule.SUPERSET:
        return {"target": p.get("label", "explicit")}
    return {}


class FiniteEngine:
    """Rule application and model enumeration for one logic over one grid."""

    def __init__(self, logic: Logic, domain: FiniteDomain | int, max_tuples: int = DEFAULT_MAX_TUPLES):
        self.logic = logic
        self.domain = domain if isinstance(domain, FiniteDomain) else FiniteDomain(domain)
        self.max_tuples = max_tuples
        self._tables: dict = {}

    # grid tables

    def _table(self, f: Formula):
        """Index-level truth table of ``f``'s top connective, validated against the grid."""
        key = (f.connective, getattr(f, "weights", None)) if not isinstance(f, (Atom, Constant)) else None
        if isinstance(f, Constant):
            idx = self.domain.index(f.value)
            if idx is None:
                raise GridClosureError(f"constant {to_text(f)} is not on the grid 1/{self.domain.denominator}")
            return idx
        if key in self._tables:
            return self._tables[key]
        vals = self.domain.values
        weights = getattr(f, "weights", None)
        if isinstance(f, Unary):
            table = []
            for a in vals:
                table.append(self._grid_index(f, connective_value(self.logic, f.connective, (a,))))
        else:
            table = {}
            for (i, a), (j, b) in itertools.product(enumerate(vals), repeat=2):
                try:
                    v = connective_value(self.logic, f.connective, (a, b), weights)
                except SemanticsError as e:
                    raise EngineError(str(e)) from None
                table[i, j] = self._grid_index(f, v)
        self._tables[key] = table
        return table

    def _grid_index(self, f: Formula, v: Fraction) -> int:
        idx = self.domain.index(v)
        if idx is None:
            raise GridClosureError(
                f"{to_text(f)} maps grid values to {v}, off the grid 1/{self.domain.denominator}"
            )
        return idx

    def check_grid_closed(self, formulas: Iterable[Formula]) -> None:
        for f in subformula_closure(formulas):
            if not isinstance(f, Atom):
                self._table(f)

    def _guard(self, n: int) -> None:
        if n > self.max_tuples:
            raise SizeGuardError(f"{n} tuples exceed the size guard of {self.max_tuples}")

    # rules

    def full(self, components: Sequence[Formula]) -> FiniteSentence:
        self._guard(self.domain.size ** len(components))
        return FiniteSentence(tuple(components), frozenset(itertools.product(range(self.domain.size), repeat=len(components))))

    def apply_rule(self, rule: Rule, inputs: Sequence[FiniteSentence], **params) -> FiniteSentence:
        if rule is Rule.AXIOM:
            if inputs:
                raise EngineError("the axiom takes no premises")
            return self.full([params["formula"]])
        if rule is Rule.INTERSECT:
            if len(inputs) != 2:
                raise EngineError("Intersect takes two premises")
            a, b = inputs
            if a.components != b.components:
                raise EngineError("Intersect premises must share the same component list")
            return FiniteSentence(a.components, a.tuples & b.tuples)
        if len(inputs) != 1:
            raise EngineError(f"{rule.value} takes one premise")
        (s,) = inputs
        k = s.arity
        if rule is Rule.PERM:
            perm = tuple(params["perm"])
            if sorted(perm) != list(range(k)):
                raise EngineError(f"{perm} is not a permutation of 0..{k - 1}")
            return FiniteSentence(
                tuple(s.components[p] for p in perm),
                frozenset(tuple(t[p] for p in perm) for t in s.tuples),
            )
        if rule is Rule.ADD:
            new = tuple(params["components"])
            if not new:
                raise EngineError("Add needs at least one new component")
            if set(new) & set(s.components) or len(set(new)) != len(new):
                raise EngineError("Add components must be new and pairwise distinct")
            self._guard(len(s.tuples) * self.domain.size ** len(new))
            tail = list(itertools.product(range(self.domain.size), repeat=len(new)))
            return FiniteSentence(s.components + new, frozenset(t + u for t in s.tuples for u in tail))
        if rule is Rule.PROJ:
            r = params["r"]
            if not 0 < r < k:
                raise EngineError(f"Proj needs 0 < r < {k}, got {r}")
            return FiniteSentence(s.components[: k - r], frozenset(t[: k - r] for t in s.tuples))
        if rule is Rule.SUPERSET:
            target: FiniteSentence = params["target"]
            if target.components != s.components:
                raise EngineError("Superset target must have the same components")
            if not s.tuples <= target.tuples:
                raise EngineError("Superset target does not contain the premise's set")
            return target
        if rule is Rule.OPERATORS:
            return self._operators(s)
        raise EngineError(f"unknown rule {rule}")

    def _operators(self, s: FiniteSentence) -> FiniteSentence:
        position = {f: i for i, f in enumerate(s.components)}
        checks = []
        for m, f in enumerate(s.components):
            if isinstance(f, Atom):
                continue
            if isinstance(f, Constant):
                checks.append((m, None, None, self._table(f)))
                continue
            kids = children(f)
            if not all(c in position for c in kids):
                continue
            table = self._table(f)
            if isinstance(f, Unary):
                checks.append((m, position[kids[0]], None, table))
            else:
                checks.append((m, position[kids[0]], position[kids[1]], table))

        def keep(t) -> bool:
            for m, i, j, table in checks:
                if i is None:
                    if t[m] != table:
                        return False
                elif j is None:
                    if t[m] != table[t[i]]:
                        return False
                elif t[m] != table[t[i], t[j]]:
                    return False
            return True

        return FiniteSentence(s.components, frozenset(t for t in s.tuples if keep(t)))

    # semantics by enumeration

    def grid_models(self, atom_names: Iterable[str]):
        names = sorted(set(atom_names))
        for combo in itertools.product(self.domain.values, repeat=len(names)):
            yield dict(zip(names, combo))

    def value_tuple(self, components: Sequence[Formula], model: Mapping[str, Fraction]) -> tuple[int, ...] | None:
        values = evaluate_all(self.logic, components, model)
        idx = tuple(self.domain.index(values[c]) for c in components)
        return None if None in idx else idx

    def satisfies(self, s: FiniteSentence, model: Mapping[str, Fraction]) -> bool:
        t = self.value_tuple(s.components, model)
        return t is not None and t in s.tuples

    def _all_atoms(self, sentences: Iterable[FiniteSentence]) -> set[str]:
        return set().union(*(atoms(c) for s in sentences for c in s.components))

    def models(self, theory: Sequence[FiniteSentence], extra_atoms: Iterable[str] = ()):
        names = self._all_atoms(theory) | set(extra_atoms)
        for m in self.grid_models(names):
            if all(self.satisfies(s, m) for s in theory):
                yield m

    def model_entails(self, theory: Sequence[FiniteSentence], query: FiniteSentence) -> bool:
        """Brute force: every grid model of ``theory`` satisfies ``query``."""
        self.check_grid_closed([c for s in [*theory, query] for c in s.components])
        q_atoms = self._all_atoms([query])
        return all(self.satisfies(query, m) for m in self.models(theory, q_atoms))

    def find_countermodel(self, theory: Sequence[FiniteSentence], query: FiniteSentence):
        q_atoms = self._all_atoms([query])
        for m in self.models(theory, q_atoms):
            if not self.satisfies(query, m):
                return m
        return None

    def satisfiable(self, theory: Sequence[FiniteSentence]) -> bool:
        self.check_grid_closed([c for s in theory for c in s.components])
        return next(self.models(theory), None) is not None

    def realized_tuples(self, components: Sequence[Formula]) -> frozenset:
        """Value tuples produced by some grid model."""
        names = set().union(*(atoms(c) for c in components)) if components else set()
        out = set()
        for m in self.grid_models(names):
            t = self.value_tuple(components, m)
            if t is not None:
                out.add(t)
        return frozenset(out)

    def is_minimized(self, s: FiniteSentence) -> bool:
        return s.tuples <= self.realized_tuples(s.components)

    # derivations

    def _lift(self, d: Derivation, index: int, target: Sequence[Formula]) -> int:
        """Add, Operators, Perm: re-express pool sentence ``index`` over ``target``."""
        pool = self._pool(d)
        s = pool[index]
        missing = tuple(g for g in target if g not in s.components)
        if missing:
            index = self._step(d, Rule.ADD, (index,), components=missing)
        index = self._step(d, Rule.OPERATORS, (index,))
        current = self._pool(d)[index].components
        if current != tuple(target):
            perm = tuple(current.index(g) for g in target)
            index = self._step(d, Rule.PERM, (index,), perm=perm)
        return index

    @staticmethod
    def _pool(d: Derivation) -> list[FiniteSentence]:
        return [*d.premises, *(st.output for st in d.steps)]

    def _step(self, d: Derivation, rule: Rule, inputs: tuple[int, ...], **params) -> int:
        pool = self._pool(d)
        out = self.apply_rule(rule, [pool[i] for i in inputs], **params)
        d.steps.append(Step(rule, inputs, params, out))
        return len(pool)

    def canonical_derivation(
        self, theory: Sequence[FiniteSentence], query: FiniteSentence
    ) -> Derivation | Refutation:
        """Derive ``query`` from ``theory`` along the completeness construction.

        Returns the derivation when the projected, minimized theory fits
        inside the query's set, otherwise a :class:`Refutation` carrying an
        offending tuple and a grid model realizing it.
        """
        comps = [c for s in [*theory, query] for c in s.components]
        self.check_grid_closed(comps)
        d = Derivation(list(theory))
        premises = list(range(len(theory)))
        if not premises:
            premises = [self._step(d, Rule.AXIOM, (), formula=query.components[0])]
        closure = subformula_closure(comps)

        lifted = [self._lift(d, i, closure) for i in premises]
        current = lifted[0]
        for other in lifted[1:]:
            current = self._step(d, Rule.INTERSECT, (current, other))

        front = list(query.components) + [g for g in closure if g not in query.components]
        if front != closure:
            current = self._step(d, Rule.PERM, (current,), perm=tuple(closure.index(g) for g in front))
        full_index = current
        r = len(closure) - query.arity
        if r > 0:
            current = self._step(d, Rule.PROJ, (current,), r=r)
        projected = self._pool(d)[current]
        extra = projected.tuples - query.tuples
        if extra:
            bad = min(extra)
            witness = next(t for t in self._pool(d)[full_index].tuples if t[: query.arity] == bad)
            model = {
                g.name: self.domain.value(witness[i]) for i, g in enumerate(front) if isinstance(g, Atom)
            }
            return Refutation(tuple(self.domain.value(i) for i in bad), model)
        self._step(d, Rule.SUPERSET, (current,), target=query, label="query")
        return d

    def replay(self, d: Derivation, query: FiniteSentence | None = None) -> bool:
        """Re-apply every step and check that it reproduces the recorded output."""
        pool = list(d.premises)
        for step in d.steps:
            out = self.apply_rule(step.rule, [pool[i] for i in step.inputs], **step.params)
            if out != step.output:
                return False
            pool.append(out)
        return query is None or (bool(d.steps) and d.steps[-1].output == query)

    def replay_log(self, lines: Sequence[str], premises: Sequence[FiniteSentence], query: FiniteSentence) -> bool:
        """Verify a textual proof log against ``premises`` and ``query``."""
        pool = list(premises)
        for line in lines:
            rule, inputs, size, params = parse_log_line(line)
            args = {}
            if rule is Rule.AXIOM:
                args["formula"] = parse_formula(params["formula"])
            elif rule is Rule.PERM:
                args["perm"] = tuple(params["perm"])
            elif rule is Rule.ADD:
                args["components"] = tuple(parse_formula(t) for t in params["add"])
            elif rule is Rule.PROJ:
                args["r"] = params["drop"]
            elif rule is Rule.SUPERSET:
                if params.get("target") != "query":
                    return False
                args["target"] = query
            try:
                out = self.apply_rule(rule, [pool[i] for i in inputs], **args)
            except (EngineError, IndexError):
                return False
            if len(out) != size:
                return False
            pool.append(out)
        return len(pool) > len(premises) and pool[-1] == query

    # Boolean combinations

    def lift(self, sentences: Sequence[FiniteSentence]) -> list[FiniteSentence]:
        """Re-express sentences over their common subformula closure."""
        closure = tuple(subformula_closure(c for s in sentences for c in s.components))
        self.check_grid_closed(closure)
        out = []
        for s in sentences:
            if s.components == closure:
                out.append(s)
                continue
            d = Derivation([s])
            self._lift(d, 0, closure)
            out.append(d.conclusion)
        return out

    def boolean_combine(self, op: str, sentences: Sequence[FiniteSentence]) -> FiniteSentence:
        op = op.lower()
        if op not in ("and", "or", "not"):
            raise EngineError(f"unknown Boolean operation {op!r}")
        if op == "not" and len(sentences) != 1:
            raise EngineError("Not takes exactly one sentence")
        if not sentences:
            raise EngineError(f"{op} needs at least one sentence")
        lifted = self.lift(sentences)
        comps = lifted[0].components
        if any(s.components != comps for s in lifted):
            raise EngineError("component mismatch after lifting")
        if op == "not":
            return FiniteSentence(comps, self.full(comps).tuples - lifted[0].tuples)
        sets = [s.tuples for s in lifted]
        combined = frozenset.intersection(*sets) if op == "and" else frozenset.union(*sets)
        return FiniteSentence(comps, combined)


def parse_log_line(line: str) -> tuple[Rule, tuple[int, ...], int, dict]:
    head, _, params = line.partition(" params=")
    fields = dict(part.split("=", 1) for part in head.split())
    try:
        rule = Rule(fields["rule"])
        inputs = () if fields["in"] == "-" else tuple(int(i) for i in fields["in"].split(","))
        size = int(fields["out-size"])
    except (KeyError, ValueError) as e:
        raise EngineError(f"malformed proof line {line!r}") from e
    return rule, inputs, size, json.loads(params) if params else {}
