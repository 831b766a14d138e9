"""Mixed-integer encoding of satisfiability and entailment with a gap variable.

Every closure formula gets a truth variable ``s<i>`` in [0, 1]; ``delta``
is maximized and every strict inequality of the semantics is written as a
non-strict one with ``delta`` on the smaller side.  A problem is
satisfiable exactly when some integral assignment reaches ``delta > 0``.

Piecewise connectives are split by booleans ``b<i>``; a guarded constraint
is only enforced when its boolean takes the guard value.  Interval choices
of a sentence are kept as a :class:`SelectorGroup`, which the solver may
treat either as one boolean per interval (big-M rows) or as a disjunctive
domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .formula import (
    Atom,
    Binary,
    Connective,
    Constant,
    Formula,
    Unary,
    Weighted,
    atoms,
    subformula_closure,
    to_text,
)
from .intervals import Interval, IntervalSet, complement, format_rational
from .semantics import Logic
from .theory import SimpleSentence, Theory

DELTA = "delta"
ZERO = Fraction(0)
ONE = Fraction(1)


class EncodingError(ValueError):
    pass


@dataclass(frozen=True)
class LinearExpr:
    coeffs: Mapping[str, Fraction] = field(default_factory=dict)
    constant: Fraction = ZERO

    def __post_init__(self):
        clean = {v: Fraction(c) for v, c in self.coeffs.items() if c != 0}
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "constant", Fraction(self.constant))

    @classmethod
    def var(cls, name: str, coeff=1) -> "LinearExpr":
        return cls({name: Fraction(coeff)})

    @classmethod
    def const(cls, value) -> "LinearExpr":
        return cls({}, Fraction(value))

    def __add__(self, other) -> "LinearExpr":
        other = _lift(other)
        coeffs = dict(self.coeffs)
        for v, c in other.coeffs.items():
            coeffs[v] = coeffs.get(v, ZERO) + c
        return LinearExpr(coeffs, self.constant + other.constant)

    __radd__ = __add__

    def __neg__(self) -> "LinearExpr":
        return LinearExpr({v: -c for v, c in self.coeffs.items()}, -self.constant)

    def __sub__(self, other) -> "LinearExpr":
        return self + (-_lift(other))

    def __rsub__(self, other) -> "LinearExpr":
        return _lift(other) - self

    def __mul__(self, k) -> "LinearExpr":
        k = Fraction(k)
        return LinearExpr({v: c * k for v, c in self.coeffs.items()}, self.constant * k)

    __rmul__ = __mul__

    def evaluate(self, assignment: Mapping[str, Fraction]) -> Fraction:
        return self.constant + sum((c * assignment[v] for v, c in self.coeffs.items()), ZERO)

    def bounds(self, box: Mapping[str, tuple[Fraction, Fraction]]) -> tuple[Fraction, Fraction]:
        lo = hi = self.constant
        for v, c in self.coeffs.items():
            a, b = box[v]
            lo += c * (a if c > 0 else b)
            hi += c * (b if c > 0 else a)
        return lo, hi

    def __str__(self) -> str:
        parts = [f"{format_rational(c)}*{v}" for v, c in sorted(self.coeffs.items())]
        if self.constant or not parts:
            parts.append(format_rational(self.constant))
        return " + ".join(parts)


def _lift(x) -> LinearExpr:
    return x if isinstance(x, LinearExpr) else LinearExpr.const(x)


@dataclass(frozen=True)
class Constraint:
    """``expr <= 0`` (or ``== 0``), enforced when ``guard`` is None or holds."""

    expr: LinearExpr
    sense: str = "<="
    guard: tuple[str, int] | None = None
    label: str = ""

    def holds(self, assignment: Mapping[str, Fraction]) -> bool:
        if self.guard is not None and assignment[self.guard[0]] != self.guard[1]:
            return True
        v = self.expr.evaluate(assignment)
        return v == 0 if self.sense == "==" else v <= 0


def le(lhs, rhs, guard=None, label="") -> Constraint:
    return Constraint(_lift(lhs) - _lift(rhs), "<=", guard, label)


def eq(lhs, rhs, guard=None, label="") -> Constraint:
    return Constraint(_lift(lhs) - _lift(rhs), "==", guard, label)


@dataclass(frozen=True)
class SelectorGroup:
    """Truth variable ``var`` must lie in one of ``intervals``; ``selectors`` name one boolean each."""

    var: str
    intervals: tuple[Interval, ...]
    selectors: tuple[str, ...]
    label: str = ""


@dataclass
class MilpProblem:
    logic: Logic
    bounds: dict[str, tuple[Fraction, Fraction]]
    booleans: list[str]
    constraints: list[Constraint]
    groups: list[SelectorGroup]
    formula_vars: dict[Formula, str]
    objective: str = DELTA
    infeasible_reason: str | None = None

    @property
    def atom_vars(self) -> dict[str, str]:
        return {f.name: v for f, v in self.formula_vars.items() if isinstance(f, Atom)}

    def box(self) -> dict[str, tuple[Fraction, Fraction]]:
        box = dict(self.bounds)
        for b in self.booleans:
            box[b] = (ZERO, ONE)
        for g in self.groups:
            for b in g.selectors:
                box[b] = (ZERO, ONE)
        return box

    def linear_rows(self, groups_as_booleans: bool = True) -> list[tuple[LinearExpr, str]]:
        """Big-M linearization: every guarded row becomes ``expr <= M * slack(guard)``.

        ``M`` is the supremum of ``expr`` over the variable box, the smallest
        value that leaves the row inactive when its guard fails.
        """
        box = self.box()
        rows: list[tuple[LinearExpr, str]] = []
        for c in self.constraints:
            if c.guard is None:
                rows.append((c.expr, c.sense))
                continue
            parts = [c.expr] if c.sense == "<=" else [c.expr, -c.expr]
            for e in parts:
                rows.append((_guarded(e, c.guard, box), "<="))
        if groups_as_booleans:
            for g in self.groups:
                rows.extend(self.selector_rows(g, box))
        return rows

    def selector_rows(self, g: SelectorGroup, box=None) -> list[tuple[LinearExpr, str]]:
        box = box or self.box()
        rows = [(sum((LinearExpr.var(b) for b in g.selectors), LinearExpr()) - 1, "==")]
        s = LinearExpr.var(g.var)
        d = LinearExpr.var(DELTA)
        for iv, b in zip(g.intervals, g.selectors):
            lower = iv.lower - s + (d if iv.lower_open else 0)
            upper = s - iv.upper + (d if iv.upper_open else 0)
            for e in (lower, upper):
                rows.append((_guarded(e, (b, 1), box), "<="))
        return rows

    def check(self, assignment: Mapping[str, Fraction]) -> list[str]:
        """Names of constraints violated by ``assignment`` (exact)."""
        bad = []
        for v, (lo, hi) in self.box().items():
            if v in assignment and not lo <= assignment[v] <= hi:
                bad.append(f"bound {v}")
        for c in self.constraints:
            if not c.holds(assignment):
                bad.append(c.label or str(c.expr))
        for g in self.groups:
            v = assignment[g.var]
            if g.selectors and all(b in assignment for b in g.selectors):
                chosen = [iv for iv, b in zip(g.intervals, g.selectors) if assignment[b] == 1]
            else:
                chosen = list(g.intervals)
            if not any(v in iv for iv in chosen):
                bad.append(g.label or f"group {g.var}")
        return bad

    def to_lp_format(self) -> str:
        """CPLEX LP text; rationals appear as decimals, so this is for debugging only."""
        lines = ["\\ real-valued logic feasibility problem", "Maximize", f" obj: {self.objective}", "Subject To"]
        for i, (e, sense) in enumerate(self.linear_rows()):
            op = "=" if sense == "==" else "<="
            terms = " ".join(f"{'+' if c > 0 else '-'} {_dec(abs(c))} {v}" for v, c in sorted(e.coeffs.items()))
            lines.append(f" c{i}: {terms or '0 x_zero'} {op} {_dec(-e.constant)}")
        lines.append("Bounds")
        for v, (lo, hi) in self.bounds.items():
            lines.append(f" {_dec(lo)} <= {v} <= {_dec(hi)}")
        binaries = [*self.booleans, *(b for g in self.groups for b in g.selectors)]
        if binaries:
            lines.append("Binary")
            lines.extend(f" {b}" for b in binaries)
        lines.append("End")
        return "\n".join(lines) + "\n"


def _dec(q: Fraction) -> str:
    return f"{float(q):.12g}"


def _guarded(e: LinearExpr, guard: tuple[str, int], box) -> LinearExpr:
    """``e <= 0`` when ``guard`` holds, vacuous otherwise."""
    var, value = guard
    sup = max(e.bounds(box)[1], ZERO)
    # value 1: e <= M (1 - b);  value 0: e <= M b
    slack = (1 - LinearExpr.var(var)) if value == 1 else LinearExpr.var(var)
    return e - sup * slack


# encoding


def rewrite(logic: Logic, f: Formula) -> Formula:
    """Replace Equiv and Not by primitive connectives with the same truth function."""
    if isinstance(f, (Atom, Constant)):
        return f
    if isinstance(f, Unary):
        child = rewrite(logic, f.child)
        if f.connective is Connective.NOT:
            if logic is Logic.LUKASIEWICZ:
                return Unary(Connective.INV, child)
            return Binary(Connective.IMPLIES, child, Constant(ZERO))
        return Unary(f.connective, child)
    left, right = rewrite(logic, f.left), rewrite(logic, f.right)
    if isinstance(f, Weighted):
        return Weighted(f.connective, f.left_weight, f.right_weight, left, right)
    if f.connective is Connective.EQUIV:
        return Binary(
            Connective.STRONG_AND,
            Binary(Connective.IMPLIES, left, right),
            Binary(Connective.IMPLIES, right, left),
        )
    return Binary(f.connective, left, right)


@dataclass
class ConnectiveEncoding:
    constraints: list[Constraint]
    booleans: list[str]
    variables: dict[Formula, str]
    bounds: dict[str, tuple[Fraction, Fraction]]


def _min_pattern(z, x, y, b, label) -> list[Constraint]:
    return [
        le(z, x, label=label),
        le(z, y, label=label),
        le(x, z, (b, 1), label),
        le(x, y, (b, 1), label),
        le(y, z, (b, 0), label),
        le(y, x, (b, 0), label),
    ]


def _max_pattern(z, x, y, b, label) -> list[Constraint]:
    return [
        le(x, z, label=label),
        le(y, z, label=label),
        le(z, x, (b, 1), label),
        le(y, x, (b, 1), label),
        le(z, y, (b, 0), label),
        le(x, y, (b, 0), label),
    ]


def encode_connective_constraints(logic: Logic, closure: Sequence[Formula]) -> ConnectiveEncoding:
    """Constraints forcing each truth variable to its connective's value.

    ``closure`` must list children before parents and must not contain
    Equiv or Not (see :func:`rewrite`).  Booleans are declared for formulas
    over fewer atoms first, so branching decides literals before clauses.
    """
    names: dict[Formula, str] = {}
    bounds: dict[str, tuple[Fraction, Fraction]] = {DELTA: (ZERO, ONE)}
    constraints: list[Constraint] = []
    booleans: list[str] = []
    d = LinearExpr.var(DELTA)

    def new_bool() -> str:
        name = f"b{len(booleans)}"
        booleans.append(name)
        return name

    for i, f in enumerate(closure):
        name = f"s{i}"
        names[f] = name
        value = f.value if isinstance(f, Constant) else None
        bounds[name] = (value, value) if value is not None else (ZERO, ONE)

    # booleans over fewer atoms are declared (and so branched) first
    position = {f: i for i, f in enumerate(closure)}
    for f in sorted(closure, key=lambda g: (len(atoms(g)), position[g])):
        if isinstance(f, (Atom, Constant)):
            continue
        name = names[f]
        label = to_text(f)
        z = LinearExpr.var(name)
        if isinstance(f, Unary):
            x = LinearExpr.var(names[f.child])
            if f.connective is Connective.INV:
                constraints.append(eq(z, 1 - x, label=label))
            elif f.connective is Connective.DELTA:
                b = new_bool()
                constraints += [
                    le(1, x, (b, 1), label),
                    le(1, z, (b, 1), label),
                    le(x + d, 1, (b, 0), label),
                    le(z, 0, (b, 0), label),
                ]
            else:
                raise EncodingError(f"{f.connective.name} must be rewritten before encoding")
            continue
        x, y = LinearExpr.var(names[f.left]), LinearExpr.var(names[f.right])
        conn = f.connective
        if isinstance(f, Weighted):
            if logic is not Logic.LUKASIEWICZ:
                raise EncodingError("weighted connectives are only available in Lukasiewicz logic")
            w1, w2 = f.weights
        else:
            w1 = w2 = ONE
        if conn is Connective.WEAK_AND or (logic is Logic.GOEDEL and conn is Connective.STRONG_AND):
            constraints += _min_pattern(z, x, y, new_bool(), label)
        elif conn is Connective.WEAK_OR or (logic is Logic.GOEDEL and conn is Connective.STRONG_OR):
            constraints += _max_pattern(z, x, y, new_bool(), label)
        elif conn is Connective.IMPLIES and logic is Logic.GOEDEL:
            b = new_bool()
            constraints += [
                le(x, y, (b, 1), label),
                le(1, z, (b, 1), label),
                le(y + d, x, (b, 0), label),
                eq(z, y, (b, 0), label),
            ]
        elif conn is Connective.STRONG_AND:
            # z = max(0, e)
            e = 1 - w1 * (1 - x) - w2 * (1 - y)
            b = new_bool()
            constraints += [le(e, z, label=label), le(z, e, (b, 1), label), le(z, 0, (b, 0), label)]
        elif conn in (Connective.STRONG_OR, Connective.IMPLIES):
            # z = min(1, e)
            e = w1 * x + w2 * y if conn is Connective.STRONG_OR else 1 - x + y
            b = new_bool()
            constraints += [le(z, e, label=label), le(e, z, (b, 1), label), le(1, z, (b, 0), label)]
        else:
            raise EncodingError(f"{conn.name} must be rewritten before encoding")
    return ConnectiveEncoding(constraints, booleans, names, bounds)


def encode_satisfiability(theory: Theory, extra: Iterable[SimpleSentence] = ()) -> MilpProblem:
    """MILP whose integral solutions with ``delta > 0`` are the models of ``theory``."""
    logic = theory.logic
    sentences = [*theory.sentences, *extra]
    rewritten = {s.formula: rewrite(logic, s.formula) for s in sentences}
    closure = subformula_closure(rewritten.values())
    enc = encode_connective_constraints(logic, closure)

    # sentences on the same formula combine into one interval set
    required: dict[Formula, IntervalSet] = {}
    for s in sentences:
        f = rewritten[s.formula]
        required[f] = required[f] & s.values if f in required else s.values

    problem = MilpProblem(logic, enc.bounds, enc.booleans, enc.constraints, [], {})
    for original, f in rewritten.items():
        problem.formula_vars[original] = enc.variables[f]
    for f, v in enc.variables.items():
        problem.formula_vars.setdefault(f, v)

    for f, values in required.items():
        var = enc.variables[f]
        if not values:
            problem.infeasible_reason = f"{to_text(f)} has an empty value set"
            problem.constraints.append(le(1, 0, label=f"empty set for {to_text(f)}"))
            continue
        if values.is_full:
            continue
        gi = len(problem.groups)
        selectors = tuple(f"g{gi}_{j}" for j in range(len(values)))
        problem.groups.append(SelectorGroup(var, values.intervals, selectors, f"{to_text(f)} in {values}"))
    return problem


def encode_entailment(theory: Theory, query: SimpleSentence, complement_mode: str = "intervals") -> MilpProblem:
    """MILP that is feasible exactly when ``theory`` does not entail ``query``.

    ``complement_mode="intervals"`` adds the complemented query set as an
    ordinary sentence; ``"sides"`` keeps the query intervals and adds one
    boolean per interval choosing whether the value lies left or right of it.
    """
    if complement_mode == "intervals":
        return encode_satisfiability(theory, [SimpleSentence(query.formula, complement(query.values))])
    if complement_mode != "sides":
        raise EncodingError(f"unknown complement mode {complement_mode!r}")
    problem = encode_satisfiability(theory, [SimpleSentence(query.formula, IntervalSet.full())])
    s = LinearExpr.var(problem.formula_vars[query.formula])
    d = LinearExpr.var(DELTA)
    for iv in query.values:
        b = f"b{len(problem.booleans)}"
        problem.booleans.append(b)
        label = f"outside {iv}"
        left = s if iv.lower_open else s + d
        right = s if iv.upper_open else s - d
        problem.constraints.append(le(left, iv.lower, (b, 1), label))
        problem.constraints.append(le(iv.upper, right, (b, 0), label))
    return problem
