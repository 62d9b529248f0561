"""Exact rational two-phase simplex.

Solves ``min c.x  s.t.  A x = b, x >= 0`` with every pivot carried out in
:class:`fractions.Fraction`, so returned points satisfy the constraints
exactly. Bland's rule picks both the entering and the leaving variable, which
rules out cycling and makes the returned vertex a deterministic function of
the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import Infeasible, LengthMismatch


class Unbounded(ArithmeticError):
    pass


@dataclass(frozen=True)
class LPSolution:
    x: tuple[Fraction, ...]
    value: Fraction
    basis: tuple[int, ...]


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r: int, col: int) -> None:
        row = self.rows[r]
        piv = row[col]
        if piv != 1:
            inv = 1 / piv
            self.rows[r] = row = [v * inv for v in row]
            self.rhs[r] *= inv
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[col]
            if f:
                self.rows[i] = [a - f * b for a, b in zip(other, row)]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = col

    def reduced_costs(self, cost: Sequence[Fraction]) -> list[Fraction]:
        red = list(cost)
        for i, bvar in enumerate(self.basis):
            cb = cost[bvar]
            if cb:
                row = self.rows[i]
                red = [d - cb * a for d, a in zip(red, row)]
        return red

    def run(self, cost: Sequence[Fraction], allowed: int) -> None:
        """Bland-rule simplex over the first ``allowed`` columns."""
        while True:
            red = self.reduced_costs(cost)
            entering = next((j for j in range(allowed) if red[j] < 0), None)
            if entering is None:
                return
            leave = None
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if (best is None or ratio < best
                            or (ratio == best and self.basis[i] < self.basis[leave])):
                        best, leave = ratio, i
            if leave is None:
                raise Unbounded("objective is unbounded below")
            self.pivot(leave, entering)


def solve_lp(
    c: Sequence[Fraction],
    A: Sequence[Sequence[Fraction]],
    b: Sequence[Fraction],
) -> LPSolution:
    """Minimise ``c.x`` over ``{x >= 0 : A x = b}``.

    Raises :class:`Infeasible` when the feasible set is empty.
    """
    nvar = len(c)
    if any(len(row) != nvar for row in A) or len(A) != len(b):
        raise LengthMismatch("constraint matrix shape does not match c and b")
    c = [Fraction(v) for v in c]
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for row, bi in zip(A, b):
        row = [Fraction(v) for v in row]
        bi = Fraction(bi)
        if bi < 0:
            row = [-v for v in row]
            bi = -bi
        rows.append(row)
        rhs.append(bi)
    m = len(rows)

    # phase 1: one artificial column per row
    for i, row in enumerate(rows):
        row.extend(Fraction(int(i == k)) for k in range(m))
    tab = _Tableau(rows, rhs, [nvar + i for i in range(m)])
    phase1 = [Fraction(0)] * nvar + [Fraction(1)] * m
    tab.run(phase1, nvar + m)
    if sum(tab.rhs[i] for i, bv in enumerate(tab.basis) if bv >= nvar) != 0:
        raise Infeasible("constraint system has no nonnegative solution")

    # drive zero-valued artificials out; rows where that is impossible are redundant
    r = 0
    while r < len(tab.rows):
        if tab.basis[r] >= nvar:
            col = next((j for j in range(nvar) if tab.rows[r][j] != 0), None)
            if col is None:
                del tab.rows[r], tab.rhs[r], tab.basis[r]
                continue
            tab.pivot(r, col)
        r += 1
    tab.rows = [row[:nvar] for row in tab.rows]

    tab.run(c, nvar)
    x = [Fraction(0)] * nvar
    for i, bv in enumerate(tab.basis):
        x[bv] = tab.rhs[i]
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPSolution(tuple(x), value, tuple(tab.basis))


def lexmin_feasible(
    A: Sequence[Sequence[Fraction]],
    b: Sequence[Fraction],
) -> tuple[Fraction, ...]:
    """Lexicographically smallest point of ``{x >= 0 : A x = b}``.

    The lexicographic minimum of a nonempty polytope is one of its vertices,
    so this is the lexicographically smallest basic feasible solution.
    """
    nvar = len(A[0]) if A else 0
    rows = [list(map(Fraction, row)) for row in A]
    rhs = [Fraction(v) for v in b]
    x: tuple[Fraction, ...] = ()
    for j in range(nvar):
        cost = [Fraction(int(k == j)) for k in range(nvar)]
        sol = solve_lp(cost, rows, rhs)
        x = sol.x
        rows.append(cost)
        rhs.append(sol.x[j])
    if not x:
        sol = solve_lp([], rows, rhs)
        x = sol.x
    return x
