"""Depth-first branch-and-bound over the booleans of a :class:`MilpProblem`.

Two strategies share the search:

``boolean``
    every interval selector is a 0/1 column with big-M rows, exactly the
    textbook linearization.
``groups`` (the default)
    the interval choice of a sentence is kept as a disjunctive domain: a
    node only bounds the truth variable by the hull of the intervals still
    allowed, and branches by splitting the list at a gap the relaxation
    fell into.

Each node runs bound propagation over the rows, restores feasibility with
the dual-free general simplex, maximizes ``delta`` and prunes when the
optimum is 0.  Interval groups are split first (they are the selectors
declared first), then connective booleans in declaration order, 0 first.
"""

from __future__ import annotations

import bisect
import sys
import time
from collections import deque
from fractions import Fraction
from typing import Callable

from ..intervals import Interval
from ..milp import DELTA, LinearExpr, MilpProblem
from .lp import CompiledLp, Feasible, Infeasible, SolveResult, SolveStats
from .simplex import ONE, ZERO, SolverError
STRATEGIES = ("auto", "groups", "boolean")


class SolverLimitError(RuntimeError):
    pass


class NodeLimitExceeded(SolverLimitError):
    pass


class TimeLimitExceeded(SolverLimitError):
    pass


def _max(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def _min(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _disjoint(iv: Interval, lo: Fraction, hi: Fraction) -> bool:
    if iv.upper < lo or (iv.upper == lo and iv.upper_open):
        return True
    return iv.lower > hi or (iv.lower == hi and iv.lower_open)


class _Group:
    __slots__ = ("var", "intervals", "lowers", "low_row", "high_row", "low_base", "high_base", "label")

    def __init__(self, var, intervals, low_row, high_row, low_base, high_base, label):
        self.var = var
        self.intervals = intervals
        self.lowers = [iv.lower for iv in intervals]
        self.low_row = low_row
        self.high_row = high_row
        self.low_base = low_base
        self.high_base = high_base
        self.label = label


class _Search:
    def __init__(self, problem: MilpProblem, strategy: str, node_limit, time_limit, trace, propagate):
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}; expected one of {', '.join(STRATEGIES)}")
        self.problem = problem
        self.as_booleans = strategy == "boolean"
        self.node_limit = node_limit
        self.deadline = None if time_limit is None else time.monotonic() + time_limit
        self.trace = trace
        self.use_propagation = propagate
        self.stats = SolveStats()

        box = problem.box()
        names = [*problem.bounds, *problem.booleans]
        if self.as_booleans:
            names += [b for g in problem.groups for b in g.selectors]
        bounds = {v: box[v] for v in names}
        rows = problem.linear_rows(groups_as_booleans=self.as_booleans)
        group_exprs = []
        if not self.as_booleans:
            d = LinearExpr.var(DELTA)
            for g in problem.groups:
                s = LinearExpr.var(g.var)
                group_exprs.append((s - d, s + d))
                rows += [(s - d, "free"), (s + d, "free")]
        self.lp = lp = CompiledLp(bounds, rows)
        self.tab = lp.tableau
        self.delta = lp.index[DELTA]
        order = list(problem.booleans)
        if self.as_booleans:
            order += [b for g in problem.groups for b in g.selectors]
        self.bools = [lp.index[b] for b in order]
        self.bool_set = set(self.bools)
        self.stats.booleans = len(self.bools)

        self.groups: list[_Group] = []
        self.ranges: list[tuple[int, int]] = []
        for g, (low_e, high_e) in zip(problem.groups if not self.as_booleans else [], group_exprs):
            low_row, f1 = lp.slack_of(low_e)
            high_row, f2 = lp.slack_of(high_e)
            if f1 != 1 or f2 != 1:
                raise SolverError("unexpected scaling of interval rows")
            lb = lp.row_bounds[low_row - self.tab.n_structural]
            hb = lp.row_bounds[high_row - self.tab.n_structural]
            self.groups.append(_Group(lp.index[g.var], g.intervals, low_row, high_row, lb, hb, g.label))
            self.ranges.append((0, len(g.intervals)))
        self.var_groups: dict[int, list[int]] = {}
        for gi, g in enumerate(self.groups):
            self.var_groups.setdefault(g.var, []).append(gi)

        n = self.tab.n_structural
        self.prop_rows = [(coeffs, n + r) for r, coeffs in enumerate(lp.row_coeffs)]
        self.var_rows: dict[int, list[int]] = {j: [] for j in range(n)}
        for r, (coeffs, _) in enumerate(self.prop_rows):
            for j in coeffs:
                self.var_rows[j].append(r)
        self.trail: list[tuple] = []

    # state changes

    def set_bounds(self, v: int, lo, hi) -> None:
        tab = self.tab
        self.trail.append(("b", v, tab.lower[v], tab.upper[v]))
        tab.set_bounds(v, lo, hi)

    def set_range(self, gi: int, rng: tuple[int, int]) -> None:
        self.trail.append(("g", gi, self.ranges[gi]))
        self.ranges[gi] = rng

    def undo(self, mark: int) -> None:
        trail, tab = self.trail, self.tab
        while len(trail) > mark:
            entry = trail.pop()
            if entry[0] == "b":
                tab.set_bounds(entry[1], entry[2], entry[3])
            else:
                self.ranges[entry[1]] = entry[2]

    def apply_hull(self, gi: int) -> bool:
        """Bound the group's variable by the hull of its remaining intervals."""
        g = self.groups[gi]
        st, en = self.ranges[gi]
        if st >= en:
            return False
        first, last = g.intervals[st], g.intervals[en - 1]
        tab = self.tab
        v = g.var
        lo, hi = max(tab.lower[v], first.lower), min(tab.upper[v], last.upper)
        if lo > hi:
            return False
        if lo != tab.lower[v] or hi != tab.upper[v]:
            self.set_bounds(v, lo, hi)
        # open hull ends keep delta away from the endpoint
        low_lo = _max(g.low_base[0], first.lower if first.lower_open else None)
        if low_lo != tab.lower[g.low_row]:
            self.set_bounds(g.low_row, low_lo, tab.upper[g.low_row])
        high_hi = _min(g.high_base[1], last.upper if last.upper_open else None)
        if high_hi != tab.upper[g.high_row]:
            self.set_bounds(g.high_row, tab.lower[g.high_row], high_hi)
        return True

    def shrink(self, gi: int) -> bool | None:
        """Drop end intervals outside the variable's bounds. None on conflict, True if changed."""
        g = self.groups[gi]
        st, en = self.ranges[gi]
        lo, hi = self.tab.lower[g.var], self.tab.upper[g.var]
        new_st, new_en = st, en
        while new_st < new_en and _disjoint(g.intervals[new_st], lo, hi):
            new_st += 1
        while new_en > new_st and _disjoint(g.intervals[new_en - 1], lo, hi):
            new_en -= 1
        if new_st >= new_en:
            return None
        if (new_st, new_en) != (st, en):
            self.set_range(gi, (new_st, new_en))
            return True
        return False

    # propagation

    def propagate(self, dirty: list[int]) -> bool:
        tab = self.tab
        lower, upper = tab.lower, tab.upper
        queue = deque()
        queued = set()
        for v in dirty:
            for r in self.var_rows[v]:
                if r not in queued:
                    queued.add(r)
                    queue.append(r)
        budget = 20 * len(self.prop_rows) + 100
        while True:
            while queue:
                r = queue.popleft()
                queued.discard(r)
                coeffs, slack = self.prop_rows[r]
                row_lo, row_hi = lower[slack], upper[slack]
                minact = maxact = ZERO
                for j, a in coeffs.items():
                    if a > 0:
                        minact += a * lower[j]
                        maxact += a * upper[j]
                    else:
                        minact += a * upper[j]
                        maxact += a * lower[j]
                if (row_hi is not None and minact > row_hi) or (row_lo is not None and maxact < row_lo):
                    return False
                for j, a in coeffs.items():
                    lo_j, hi_j = lower[j], upper[j]
                    new_lo, new_hi = lo_j, hi_j
                    if row_hi is not None:
                        rest = row_hi - minact + (a * lo_j if a > 0 else a * hi_j)
                        if a > 0:
                            new_hi = min(new_hi, rest / a)
                        else:
                            new_lo = max(new_lo, rest / a)
                    if row_lo is not None:
                        rest = row_lo - maxact + (a * hi_j if a > 0 else a * lo_j)
                        if a > 0:
                            new_lo = max(new_lo, rest / a)
                        else:
                            new_hi = min(new_hi, rest / a)
                    if j in self.bool_set:
                        new_lo = ZERO if new_lo <= 0 else ONE
                        new_hi = ONE if new_hi >= 1 else ZERO
                    if new_lo > new_hi:
                        return False
                    if new_lo == lo_j and new_hi == hi_j:
                        continue
                    if budget <= 0:
                        continue
                    budget -= 1
                    self.set_bounds(j, new_lo, new_hi)
                    for r2 in self.var_rows[j]:
                        if r2 not in queued:
                            queued.add(r2)
                            queue.append(r2)
                    for gi in self.var_groups.get(j, ()):
                        changed = self.shrink(gi)
                        if changed is None:
                            return False
                        if changed:
                            if not self.apply_hull(gi):
                                return False
                            for r2 in self.var_rows[j]:
                                if r2 not in queued:
                                    queued.add(r2)
                                    queue.append(r2)
            return True

    # search

    def _limits(self) -> None:
        if self.node_limit is not None and self.stats.nodes > self.node_limit:
            raise NodeLimitExceeded(f"node limit of {self.node_limit} exceeded")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise TimeLimitExceeded("time limit exceeded")

    def _emit(self, depth: int, text: str) -> None:
        if self.trace is not None:
            self.trace(f"node={self.stats.nodes} depth={depth} {text}")

    def run(self) -> SolveResult:
        start = time.monotonic()
        try:
            witness = None
            if not self.lp.trivially_infeasible:
                ok = all(self.apply_hull(gi) for gi in range(len(self.groups)))
                if ok:
                    witness = self.node(0, list(range(self.tab.n_structural)))
        finally:
            self.stats.elapsed = time.monotonic() - start
            self.stats.pivots = self.tab.pivots
        if witness is None:
            return Infeasible(self.stats)
        return Feasible(witness, witness[DELTA], self.stats)

    def node(self, depth: int, dirty: list[int]):
        self.stats.nodes += 1
        self.stats.max_depth = max(self.stats.max_depth, depth)
        self._limits()
        tab = self.tab
        if self.use_propagation and not self.propagate(dirty):
            self._emit(depth, "prune=propagation")
            return None
        if tab.upper[self.delta] <= 0:
            self._emit(depth, "prune=delta-bound")
            return None
        if not tab.check():
            self._emit(depth, "prune=infeasible")
            return None
        best = tab.maximize(self.delta)
        if best <= 0:
            self._emit(depth, "prune=delta-zero")
            return None
        value = tab.value
        for gi, g in enumerate(self.groups):
            x = value[g.var]
            st, en = self.ranges[gi]
            p = bisect.bisect_right(g.lowers, x, st, en)
            if p > st and x in g.intervals[p - 1]:
                continue
            if p > st and g.intervals[p - 1].lower == x:
                p -= 1
            p = min(max(p, st), en)
            self._emit(depth, f"delta={best} split={g.label} at={x}")
            for rng in ((st, p), (p, en)):
                if rng[0] >= rng[1]:
                    continue
                mark = len(self.trail)
                self.set_range(gi, rng)
                found = None
                if self.apply_hull(gi):
                    found = self.node(depth + 1, [g.var])
                self.undo(mark)
                if found is not None:
                    return found
            return None
        for b in self.bools:
            x = value[b]
            if x != 0 and x != 1:
                self._emit(depth, f"delta={best} branch={self.lp.names[b]}")
                for bit in (ZERO, ONE):
                    mark = len(self.trail)
                    self.set_bounds(b, bit, bit)
                    found = self.node(depth + 1, [b])
                    self.undo(mark)
                    if found is not None:
                        return found
                return None
        self._emit(depth, f"delta={best} leaf")
        return self._witness()

    def _witness(self) -> dict[str, Fraction]:
        values = self.lp.values()
        if not self.as_booleans:
            for g in self.problem.groups:
                x = values[g.var]
                hit = False
                for iv, b in zip(g.intervals, g.selectors):
                    chosen = not hit and x in iv
                    values[b] = ONE if chosen else ZERO
                    hit = hit or chosen
        bad = self.problem.check(values)
        if bad:
            raise SolverError(f"witness violates {bad[:3]}")
        return values


def solve_milp(
    problem: MilpProblem,
    *,
    strategy: str = "auto",
    node_limit: int | None = None,
    time_limit: float | None = None,
    trace: Callable[[str], None] | None = None,
    propagate: bool = True,
) -> SolveResult:
    """Find an integral assignment with ``delta > 0`` or prove there is none.

    Raises :class:`NodeLimitExceeded` / :class:`TimeLimitExceeded` when a
    configured limit is hit before a verdict.
    """
    search = _Search(problem, strategy, node_limit, time_limit, trace, propagate)
    limit = sys.getrecursionlimit()
    needed = 4 * (len(search.bools) + sum(len(g.intervals) for g in search.groups)) + 1000
    if needed > limit:
        sys.setrecursionlimit(needed)
    try:
        return search.run()
    finally:
        sys.setrecursionlimit(limit)
