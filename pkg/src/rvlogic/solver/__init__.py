"""Exact rational LP and branch-and-bound feasibility search."""

from .bnb import NodeLimitExceeded, SolverLimitError, TimeLimitExceeded, solve_milp
from .lp import Feasible, Infeasible, LpProblem, SolveResult, SolveStats, solve_lp
from .simplex import SolverError, Tableau

__all__ = [
    "Feasible",
    "Infeasible",
    "LpProblem",
    "NodeLimitExceeded",
    "SolveResult",
    "SolveStats",
    "SolverError",
    "SolverLimitError",
    "Tableau",
    "TimeLimitExceeded",
    "solve_lp",
    "solve_milp",
]
