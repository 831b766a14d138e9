"""Exact rational simplex over bounded variables.

The tableau follows the general-form simplex used by SMT solvers: every
row defines a slack ``r = sum(a_j x_j)``, bounds live on variables, and
non-basic variables may sit anywhere inside their bounds.  Bounds can be
tightened and restored freely, which makes the tableau cheap to reuse
across branch-and-bound nodes.  Both phases use Bland's rule.

Arithmetic runs on GMP rationals; values cross the API as ``Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

ZERO = mpq(0)
ONE = mpq(1)


def to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _q(x):
    return None if x is None else mpq(x)


class SolverError(RuntimeError):
    """Internal failure; never a verdict."""


class Tableau:
    def __init__(
        self,
        lower: Sequence[Fraction | None],
        upper: Sequence[Fraction | None],
        rows: Sequence[tuple[dict[int, Fraction], Fraction | None, Fraction | None]],
        max_pivots: int = 10_000_000,
    ):
        n = len(lower)
        self.n_structural = n
        self.lower: list = [_q(x) for x in lower]
        self.upper: list = [_q(x) for x in upper]
        self.rows: dict[int, dict[int, Fraction]] = {}
        self.cols: dict[int, set[int]] = {j: set() for j in range(n)}
        self.basic = [False] * n
        self.pivots = 0
        self.max_pivots = max_pivots
        self.value: list = [_start(lo, hi) for lo, hi in zip(self.lower, self.upper)]
        for coeffs, lo, hi in rows:
            v = len(self.lower)
            self.lower.append(_q(lo))
            self.upper.append(_q(hi))
            self.basic.append(True)
            row = {j: mpq(a) for j, a in coeffs.items() if a != 0}
            self.rows[v] = row
            for j in row:
                self.cols[j].add(v)
            self.value.append(sum((a * self.value[j] for j, a in row.items()), ZERO))

    @property
    def size(self) -> int:
        return len(self.lower)

    # bounds

    def set_bounds(self, v: int, lo, hi) -> None:
        lo, hi = _q(lo), _q(hi)
        self.lower[v] = lo
        self.upper[v] = hi
        if not self.basic[v]:
            x = self.value[v]
            if lo is not None and x < lo:
                self._update(v, lo)
            elif hi is not None and x > hi:
                self._update(v, hi)

    def _update(self, j: int, x) -> None:
        step = x - self.value[j]
        if step:
            value = self.value
            rows = self.rows
            for i in self.cols[j]:
                value[i] += rows[i][j] * step
            value[j] = x

    # pivoting

    def _pivot_and_update(self, i: int, j: int, x) -> None:
        row_i = self.rows[i]
        theta = (x - self.value[i]) / row_i[j]
        self.value[i] = x
        self.value[j] += theta
        for k in self.cols[j]:
            if k != i:
                self.value[k] += self.rows[k][j] * theta
        self._pivot(i, j)

    def _pivot(self, i: int, j: int) -> None:
        self.pivots += 1
        if self.pivots > self.max_pivots:
            raise SolverError("pivot limit exceeded")
        rows, cols = self.rows, self.cols
        row_i = rows.pop(i)
        a = row_i.pop(j)
        for l in row_i:
            cols[l].discard(i)
        users = cols.pop(j)
        users.discard(i)
        inv = 1 / a
        new_row = {l: -c * inv for l, c in row_i.items()}
        new_row[i] = inv
        cols[i] = set()
        for l in new_row:
            cols[l].add(j)
        rows[j] = new_row
        for k in users:
            row_k = rows[k]
            c = row_k.pop(j)
            for l, cl in new_row.items():
                nv = row_k.get(l, ZERO) + c * cl
                if nv:
                    if l not in row_k:
                        cols[l].add(k)
                    row_k[l] = nv
                elif l in row_k:
                    del row_k[l]
                    cols[l].discard(k)
        self.basic[i] = False
        self.basic[j] = True

    def check(self) -> bool:
        """Restore feasibility of basic variables; False when the bounds are inconsistent."""
        lower, upper, value = self.lower, self.upper, self.value
        while True:
            # Bland: smallest violated basic variable
            i = None
            for v in sorted(self.rows):
                lo, hi = lower[v], upper[v]
                x = value[v]
                if (lo is not None and x < lo) or (hi is not None and x > hi):
                    i = v
                    break
            if i is None:
                return True
            row = self.rows[i]
            below = lower[i] is not None and value[i] < lower[i]
            entering = None
            for j in sorted(row):
                a = row[j]
                if below == (a > 0):
                    ok = upper[j] is None or value[j] < upper[j]
                else:
                    ok = lower[j] is None or value[j] > lower[j]
                if ok:
                    entering = j
                    break
            if entering is None:
                return False
            self._pivot_and_update(i, entering, lower[i] if below else upper[i])

    def maximize(self, t: int):
        """Maximize variable ``t`` from a feasible state; returns the optimum."""
        lower, upper, value = self.lower, self.upper, self.value
        while True:
            objective = self.rows[t] if self.basic[t] else {t: ONE}
            entering = None
            direction = 0
            for j in sorted(objective):
                c = objective[j]
                if c > 0 and (upper[j] is None or value[j] < upper[j]):
                    entering, direction = j, 1
                    break
                if c < 0 and (lower[j] is None or value[j] > lower[j]):
                    entering, direction = j, -1
                    break
            if entering is None:
                return value[t]
            j = entering
            # ratio test; ties prefer a bound flip, then the smallest leaving index
            if direction > 0:
                best = None if upper[j] is None else (upper[j] - value[j], -1)
            else:
                best = None if lower[j] is None else (value[j] - lower[j], -1)
            for i in self.cols[j]:
                rate = self.rows[i][j] * direction
                if rate > 0:
                    if upper[i] is None:
                        continue
                    cand = ((upper[i] - value[i]) / rate, i)
                else:
                    if lower[i] is None:
                        continue
                    cand = ((value[i] - lower[i]) / -rate, i)
                if best is None or cand < best:
                    best = cand
            if best is None:
                raise SolverError("objective is unbounded")
            step, leaving = best
            if leaving == -1:
                self._update(j, value[j] + direction * step)
            else:
                rate = self.rows[leaving][j] * direction
                target = upper[leaving] if rate > 0 else lower[leaving]
                self._pivot_and_update(leaving, j, target)

    def assignment(self) -> list[Fraction]:
        return [to_fraction(x) for x in self.value[: self.n_structural]]


def _start(lo, hi):
    if lo is not None:
        return lo
    if hi is not None:
        return hi
    return ZERO
