"""Exact linear feasibility over the rationals.

Phase-1 simplex with Fraction arithmetic and Bland's rule: decides
{x >= 0 : A x = b} exactly and, when infeasible, reports the positive
phase-1 optimum as the exact infeasibility gap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    solution: Optional[tuple[Fraction, ...]]
    gap: Fraction  # phase-1 optimum; 0 iff feasible


def solve_feasibility(rows: Sequence[Sequence[Fraction]],
                      rhs: Sequence[Fraction]) -> FeasibilityResult:
    m = len(rows)
    if m == 0:
        return FeasibilityResult(True, (), Fraction(0))
    n = len(rows[0])
    A = [[Fraction(v) for v in row] for row in rows]
    b = [Fraction(v) for v in rhs]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]

    # tableau over columns: n structural + m artificial + 1 rhs
    width = n + m
    T = [A[i] + [Fraction(1) if j == i else Fraction(0) for j in range(m)] + [b[i]]
         for i in range(m)]
    basis = [n + i for i in range(m)]
    # objective: minimize sum of artificials; expressed as reduced costs
    z = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(width + 1):
            z[j] += T[i][j]

    while True:
        enter = None
        for j in range(n):
            # artificials never re-enter, so z stays the sum of artificials
            if j not in basis and z[j] > 0:
                enter = j  # Bland: smallest improving index
                break
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][width] / T[i][enter]
                if best is None or ratio < best or \
                        (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            break  # unbounded cannot happen for phase 1; safety stop
        piv = T[leave][enter]
        T[leave] = [v / piv for v in T[leave]]
        for i in range(m):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [v - f * w for v, w in zip(T[i], T[leave])]
        f = z[enter]
        if f != 0:
            z = [v - f * w for v, w in zip(z, T[leave])]
        basis[leave] = enter

    gap = z[width]
    if gap != 0:
        return FeasibilityResult(False, None, gap)
    x = [Fraction(0)] * n
    for i, bj in enumerate(basis):
        if bj < n:
            x[bj] = T[i][width]
    return FeasibilityResult(True, tuple(x), Fraction(0))
