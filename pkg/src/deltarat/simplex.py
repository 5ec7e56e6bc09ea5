"""Exact linear programming over the rationals.

The solver is a two-phase tableau simplex with Bland's rule, run with
integer (fraction-free) pivoting: the tableau is kept as integer entries over
a single positive common denominator, the determinant of the current basis.
Every update divides exactly, so there is no rounding and no gcd work per
entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Hashable, Mapping

INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
OPTIMAL = "optimal"

_SENSES = ("==", "<=", ">=")


@dataclass
class Constraint:
    coeffs: dict
    sense: str
    rhs: Fraction = Fraction(0)


@dataclass
class LinearSystem:
    """Named-variable system of linear (in)equalities with an optional
    objective to maximise. Variables are non-negative unless listed in
    ``free``."""

    variables: list = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: dict | None = None
    free: set = field(default_factory=set)

    def add_variable(self, name: Hashable, free: bool = False) -> None:
        if name in self._index():
            raise ValueError(f"duplicate variable {name!r}")
        self.variables.append(name)
        if free:
            self.free.add(name)

    def add(self, coeffs: Mapping, sense: str, rhs=0) -> None:
        if sense not in _SENSES:
            raise ValueError(f"unknown constraint sense {sense!r}")
        known = self._index()
        for v in coeffs:
            if v not in known:
                raise ValueError(f"constraint references undeclared variable {v!r}")
        self.constraints.append(
            Constraint({v: Fraction(c) for v, c in coeffs.items() if c != 0}, sense, Fraction(rhs))
        )

    def _index(self) -> dict:
        return {v: j for j, v in enumerate(self.variables)}

    def check(self, assignment: Mapping) -> bool:
        """Exact re-verification of an assignment against every constraint."""
        for v in self.variables:
            if v not in self.free and assignment.get(v, 0) < 0:
                return False
        for con in self.constraints:
            lhs = sum((c * assignment.get(v, 0) for v, c in con.coeffs.items()), Fraction(0))
            if con.sense == "==" and lhs != con.rhs:
                return False
            if con.sense == "<=" and lhs > con.rhs:
                return False
            if con.sense == ">=" and lhs < con.rhs:
                return False
        return True


@dataclass
class LPResult:
    status: str
    value: Fraction | None = None
    assignment: dict | None = None


def _scale_to_int(values) -> tuple[list[int], int]:
    den = 1
    for v in values:
        den = lcm(den, v.denominator)
    return [int(v * den) for v in values], den


class _Tableau:
    def __init__(self, rows: list[list[int]], basis: list[int]):
        self.T = rows  # row 0 is the objective row
        self.basis = basis  # basis[i] is the basic column of row i+1
        self.d = 1

    def pivot(self, r: int, c: int) -> None:
        T, d = self.T, self.d
        prow = T[r]
        p = prow[c]
        for i, row in enumerate(T):
            if i == r:
                continue
            f = row[c]
            if f:
                T[i] = [(x * p - f * y) // d for x, y in zip(row, prow)]
            elif p != d:
                T[i] = [x * p // d for x in row]
        self.basis[r - 1] = c
        if p < 0:
            for i, row in enumerate(T):
                T[i] = [-x for x in row]
            p = -p
        self.d = p

    def run(self, allowed: int) -> str:
        """Maximise the objective row over columns ``< allowed``."""
        T = self.T
        while True:
            obj = T[0]
            enter = next((j for j in range(allowed) if obj[j] < 0), None)
            if enter is None:
                return OPTIMAL
            best = None
            for i in range(1, len(T)):
                a = T[i][enter]
                if a > 0:
                    rhs = T[i][-1]
                    if best is None:
                        best = (i, rhs, a)
                        continue
                    _, brhs, ba = best
                    lhs_cmp = rhs * ba
                    rhs_cmp = brhs * a
                    if lhs_cmp < rhs_cmp or (lhs_cmp == rhs_cmp and self.basis[i - 1] < self.basis[best[0] - 1]):
                        best = (i, rhs, a)
            if best is None:
                return UNBOUNDED
            self.pivot(best[0], enter)


def solve(system: LinearSystem) -> LPResult:
    """Solve ``system`` exactly.

    Without an objective the result is ``optimal`` with value ``None`` when
    the system is feasible.
    """
    columns: list[tuple[Hashable, int]] = []
    col_of: dict = {}
    for v in system.variables:
        col_of[v] = len(columns)
        columns.append((v, 1))
        if v in system.free:
            columns.append((v, -1))
    n_struct = len(columns)

    raw_rows: list[tuple[list[Fraction], str, Fraction]] = []
    for con in system.constraints:
        coeffs = [Fraction(0)] * n_struct
        for v, c in con.coeffs.items():
            j = col_of[v]
            coeffs[j] += c
            if v in system.free:
                coeffs[j + 1] -= c
        raw_rows.append((coeffs, con.sense, con.rhs))

    n_slack = sum(1 for _, s, _ in raw_rows if s != "==")
    m = len(raw_rows)
    n_cols = n_struct + n_slack + m  # structural, slack, artificial
    rows: list[list[int]] = [[0] * (n_cols + 1)]
    slack_j = n_struct
    for i, (coeffs, sense, rhs) in enumerate(raw_rows):
        ints, _ = _scale_to_int(coeffs + [rhs])
        row = ints[:-1] + [0] * (n_slack + m) + [ints[-1]]
        if sense != "==":
            row[slack_j] = 1 if sense == "<=" else -1
            slack_j += 1
        if row[-1] < 0:
            row = [-x for x in row]
        row[n_struct + n_slack + i] = 1
        rows.append(row)
    art0 = n_struct + n_slack

    # phase 1: maximise -(sum of artificials)
    obj = rows[0]
    for row in rows[1:]:
        for j in range(art0):
            obj[j] -= row[j]
        obj[-1] -= row[-1]
    tab = _Tableau(rows, [art0 + i for i in range(m)])
    tab.run(art0)
    if tab.T[0][-1] < 0:
        return LPResult(INFEASIBLE)

    # drive degenerate artificials out of the basis; drop redundant rows
    i = 1
    while i < len(tab.T):
        if tab.basis[i - 1] >= art0:
            row = tab.T[i]
            j = next((j for j in range(art0) if row[j] != 0), None)
            if j is None:
                del tab.T[i]
                del tab.basis[i - 1]
                continue
            tab.pivot(i, j)
        i += 1

    cost = [Fraction(0)] * n_struct
    if system.objective:
        for v, c in system.objective.items():
            j = col_of[v]
            cost[j] += Fraction(c)
            if v in system.free:
                cost[j + 1] -= Fraction(c)
    icost, cscale = _scale_to_int(cost)
    d = tab.d
    obj = [-c * d for c in icost] + [0] * (n_cols - n_struct) + [0]
    for r, b in enumerate(tab.basis, start=1):
        if b < n_struct and icost[b]:
            cb = icost[b]
            obj = [x + cb * y for x, y in zip(obj, tab.T[r])]
    tab.T[0] = obj
    status = tab.run(art0)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)

    values = [Fraction(0)] * n_struct
    for r, b in enumerate(tab.basis, start=1):
        if b < n_struct:
            values[b] = Fraction(tab.T[r][-1], tab.d)
    assignment = {}
    for v in system.variables:
        j = col_of[v]
        assignment[v] = values[j] - values[j + 1] if v in system.free else values[j]
    value = None
    if system.objective is not None:
        value = sum((Fraction(c) * assignment[v] for v, c in system.objective.items()), Fraction(0))
    return LPResult(OPTIMAL, value, assignment)
