"""Linear programs with a single maximized variable, solved exactly."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ..milp import LinearExpr
from .simplex import SolverError, Tableau, to_fraction


@dataclass
class SolveStats:
    nodes: int = 0
    pivots: int = 0
    max_depth: int = 0
    booleans: int = 0
    elapsed: float = 0.0


@dataclass(frozen=True)
class Feasible:
    assignment: dict[str, Fraction]
    objective: Fraction
    stats: SolveStats | None = field(default=None, compare=False)

    @property
    def feasible(self) -> bool:
        return True


@dataclass(frozen=True)
class Infeasible:
    stats: SolveStats | None = field(default=None, compare=False)

    @property
    def feasible(self) -> bool:
        return False


SolveResult = Feasible | Infeasible


@dataclass
class LpProblem:
    """Maximize ``objective`` subject to ``rows`` (``expr <= 0``, ``== 0`` or ``>= 0``).

    ``bounds`` maps every variable to a finite ``(lower, upper)`` pair.
    """

    bounds: dict[str, tuple[Fraction, Fraction]]
    rows: list[tuple[LinearExpr, str]]
    objective: str


def _row_bounds(e: LinearExpr, sense: str) -> tuple[Fraction | None, Fraction | None]:
    rhs = -e.constant
    if sense == "<=":
        return None, rhs
    if sense == ">=":
        return rhs, None
    if sense == "==":
        return rhs, rhs
    if sense == "free":
        return None, None
    raise ValueError(f"unknown relation {sense!r}")


class CompiledLp:
    """Variables and rows of an LP mapped onto a :class:`Tableau`.

    Rows with identical coefficients share one slack whose bounds are the
    intersection of theirs; rows without variables are checked up front.
    """

    def __init__(self, bounds: Mapping[str, tuple[Fraction, Fraction]], rows):
        self.names = list(bounds)
        self.index = {v: i for i, v in enumerate(self.names)}
        merged: dict[tuple, list] = {}
        self.trivially_infeasible = False
        for e, sense in rows:
            lo, hi = _row_bounds(e, sense)
            if not e.coeffs:
                if (lo is not None and lo > 0) or (hi is not None and hi < 0):
                    self.trivially_infeasible = True
                continue
            key = tuple(sorted((self.index[v], c) for v, c in e.coeffs.items()))
            # normalize the scale so parallel rows merge
            lead = abs(key[0][1])
            key = tuple((j, c / lead) for j, c in key)
            lo = None if lo is None else lo / lead
            hi = None if hi is None else hi / lead
            if key in merged:
                cur = merged[key]
                cur[0] = lo if cur[0] is None else (cur[0] if lo is None else max(cur[0], lo))
                cur[1] = hi if cur[1] is None else (cur[1] if hi is None else min(cur[1], hi))
            else:
                merged[key] = [lo, hi]
        self.row_keys = list(merged)
        self.row_pos = {k: i for i, k in enumerate(self.row_keys)}
        self.row_bounds = [tuple(b) for b in merged.values()]
        self.row_coeffs = [dict(k) for k in self.row_keys]
        self.tableau = Tableau(
            [Fraction(bounds[v][0]) for v in self.names],
            [Fraction(bounds[v][1]) for v in self.names],
            [(c, lo, hi) for c, (lo, hi) in zip(self.row_coeffs, merged.values())],
        )
        for (lo, hi) in merged.values():
            if lo is not None and hi is not None and lo > hi:
                self.trivially_infeasible = True

    def slack_of(self, e: LinearExpr) -> tuple[int, Fraction]:
        """Tableau variable of the row holding ``e``'s coefficients, and the factor ``e / row``."""
        key = tuple(sorted((self.index[v], c) for v, c in e.coeffs.items()))
        lead = abs(key[0][1])
        key = tuple((j, c / lead) for j, c in key)
        return self.tableau.n_structural + self.row_pos[key], lead

    def values(self) -> dict[str, Fraction]:
        return dict(zip(self.names, self.tableau.assignment()))


def solve_lp(p: LpProblem) -> SolveResult:
    """Maximize the objective exactly; ``Feasible`` carries a vertex-optimal assignment."""
    if p.objective not in p.bounds:
        raise SolverError(f"objective variable {p.objective!r} has no bounds")
    lp = CompiledLp(p.bounds, p.rows)
    stats = SolveStats(nodes=1)
    if lp.trivially_infeasible or not lp.tableau.check():
        stats.pivots = lp.tableau.pivots
        return Infeasible(stats)
    best = lp.tableau.maximize(lp.index[p.objective])
    stats.pivots = lp.tableau.pivots
    return Feasible(lp.values(), to_fraction(best), stats)
