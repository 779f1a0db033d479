"""Exact two-phase simplex over the rationals.

Problems have the form::

    maximize    c . x
    subject to  A_ub x <= b_ub,  A_eq x == b_eq,  x >= 0

Every row is scaled to integers up front and the tableau is pivoted
fraction-free (each stored entry is the true entry times the current basis
determinant), so no ``Fraction`` arithmetic happens inside the loop.
Bland's rule is used for both phases, which rules out cycling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import kernels
from .rational import lcm_of_denominators

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None
    pivots: int = 0

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL


def _int_row(coeffs: Sequence, rhs) -> tuple[list[int], int]:
    vals = [Fraction(v) for v in coeffs] + [Fraction(rhs)]
    k = lcm_of_denominators(vals)
    ints = [int(v * k) for v in vals]
    return ints[:-1], ints[-1]


class _Tableau:
    def __init__(self, n, c, A_ub, b_ub, A_eq, b_eq):
        rows = []  # (int coeffs, int rhs, kind) with rhs >= 0
        for a, b in zip(A_ub, b_ub):
            ia, ib = _int_row(a, b)
            if ib >= 0:
                rows.append((ia, ib, "slack"))
            else:
                rows.append(([-v for v in ia], -ib, "surplus"))
        for a, b in zip(A_eq, b_eq):
            ia, ib = _int_row(a, b)
            if ib < 0:
                ia, ib = [-v for v in ia], -ib
            rows.append((ia, ib, "eq"))

        n_slack = sum(1 for r in rows if r[2] != "eq")
        n_art = sum(1 for r in rows if r[2] != "slack")
        self.n = n
        self.art_start = n + n_slack
        width = n + n_slack + n_art + 1
        self.rhs = width - 1
        m = len(rows)

        T = []
        basis = []
        s = n
        a = self.art_start
        for ia, ib, kind in rows:
            row = [0] * width
            row[:n] = ia
            row[-1] = ib
            if kind == "slack":
                row[s] = 1
                basis.append(s)
                s += 1
            elif kind == "surplus":
                row[s] = -1
                s += 1
                row[a] = 1
                basis.append(a)
                a += 1
            else:
                row[a] = 1
                basis.append(a)
                a += 1
            T.append(row)

        cvals = [Fraction(v) for v in c]
        self.c_scale = lcm_of_denominators(cvals)
        z2 = [0] * width
        for j, v in enumerate(cvals):
            z2[j] = -int(v * self.c_scale)
        T.append(z2)
        self.z2 = m
        self.z1 = None
        if n_art:
            z1 = [0] * width
            for i in range(m):
                if basis[i] >= self.art_start:
                    Ti = T[i]
                    for j in range(width):
                        z1[j] -= Ti[j]
            for j in range(self.art_start, width - 1):
                z1[j] = 0
            T.append(z1)
            self.z1 = m + 1
        self.T = T
        self.basis = basis
        self.m = m
        self.det = 1
        self.pivots = 0

    def _pivot(self, r, col):
        self.det = kernels.pivot(self.T, r, col, self.det)
        if self.det < 0:
            for row in self.T:
                for j in range(len(row)):
                    row[j] = -row[j]
            self.det = -self.det
        self.basis[r] = col
        self.pivots += 1

    def _run(self, zrow, col_limit):
        T = self.T
        rhs = self.rhs
        rows = range(self.m)
        while True:
            z = T[zrow]
            col = -1
            for j in range(col_limit):
                if z[j] < 0:
                    col = j
                    break
            if col < 0:
                return OPTIMAL
            r = kernels.ratio_test(T, col, rhs, self.basis, rows)
            if r < 0:
                return UNBOUNDED
            self._pivot(r, col)

    def phase1(self) -> bool:
        if self.z1 is None:
            return True
        self._run(self.z1, self.rhs)
        if self.T[self.z1][self.rhs] < 0:
            return False
        # drive zero-level artificials out of the basis
        i = 0
        while i < self.m:
            if self.basis[i] >= self.art_start:
                row = self.T[i]
                col = next((j for j in range(self.art_start) if row[j] != 0), -1)
                if col >= 0:
                    self._pivot(i, col)
                else:
                    del self.T[i]
                    del self.basis[i]
                    self.m -= 1
                    self.z2 -= 1
                    self.z1 -= 1
                    continue
            i += 1
        del self.T[self.z1]
        self.z1 = None
        return True

    def phase2(self) -> str:
        return self._run(self.z2, self.art_start)

    def solution(self) -> tuple[Fraction, tuple[Fraction, ...]]:
        x = [Fraction(0)] * self.n
        for i, b in enumerate(self.basis):
            if b < self.n:
                x[b] = Fraction(self.T[i][self.rhs], self.det)
        value = Fraction(self.T[self.z2][self.rhs], self.det * self.c_scale)
        return value, tuple(x)


def maximize(c, A_ub=(), b_ub=(), A_eq=(), b_eq=()) -> LPResult:
    """Solve the LP exactly.  Inputs may be ints, Fractions or decimal
    strings; ``x >= 0`` is implicit."""
    n = len(c)
    for row in list(A_ub) + list(A_eq):
        if len(row) != n:
            raise ValueError("constraint row length does not match objective")
    if len(A_ub) != len(b_ub) or len(A_eq) != len(b_eq):
        raise ValueError("row count mismatch between A and b")
    tab = _Tableau(n, c, A_ub, b_ub, A_eq, b_eq)
    if not tab.phase1():
        return LPResult(INFEASIBLE, pivots=tab.pivots)
    status = tab.phase2()
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, pivots=tab.pivots)
    value, x = tab.solution()
    return LPResult(OPTIMAL, value, x, tab.pivots)


def is_feasible(A_eq, b_eq, A_ub=(), b_ub=()) -> LPResult:
    """Phase 1 only; ``status`` is OPTIMAL (feasible) or INFEASIBLE and
    ``x`` is a feasible point when one exists."""
    n = len(A_eq[0]) if A_eq else len(A_ub[0])
    return maximize([0] * n, A_ub, b_ub, A_eq, b_eq)
