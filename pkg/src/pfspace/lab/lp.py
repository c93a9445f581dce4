"""Dense two-phase simplex over the rationals.

Solves ``min c·x  s.t.  A x = b, x >= 0`` exactly.  Bland's rule makes it
cycle-free, which matters here: transport polytopes are highly degenerate.
Meant for desk-scale problems (a few dozen variables).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)


class LPError(Exception):
    pass


class Infeasible(LPError):
    pass


class Unbounded(LPError):
    pass


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    x: tuple[Fraction, ...]
    pivots: int


class _Tableau:
    def __init__(self, rows, basis):
        self.rows = rows  # each row: coefficients + [rhs]
        self.basis = basis
        self.pivots = 0

    def pivot(self, r: int, col: int) -> None:
        row = self.rows[r]
        piv = row[col]
        if piv != 1:
            self.rows[r] = row = [v / piv for v in row]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[col]
            if f:
                self.rows[i] = [a - f * b for a, b in zip(other, row)]
        self.basis[r] = col
        self.pivots += 1

    def reduced_costs(self, cost: Sequence[Fraction], ncols: int) -> list[Fraction]:
        red = list(cost[:ncols])
        for i, bi in enumerate(self.basis):
            cb = cost[bi]
            if cb:
                row = self.rows[i]
                for j in range(ncols):
                    if row[j]:
                        red[j] -= cb * row[j]
        return red

    def run(self, cost: Sequence[Fraction], allowed: int) -> None:
        """Minimise ``cost`` using columns ``< allowed`` as entering candidates."""
        while True:
            red = self.reduced_costs(cost, allowed)
            entering = next((j for j in range(allowed) if red[j] < 0), None)
            if entering is None:
                return
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise Unbounded("objective unbounded below")
            self.pivot(best[1], entering)


def solve(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Exact minimum of ``c·x`` over ``{x >= 0 : A x = b}``."""
    c = [Fraction(v) for v in c]
    n = len(c)
    m = len(A)
    rows = []
    for i in range(m):
        coeffs = [Fraction(v) for v in A[i]]
        rhs = Fraction(b[i])
        if len(coeffs) != n:
            raise ValueError("constraint row length does not match c")
        if rhs < 0:
            coeffs = [-v for v in coeffs]
            rhs = -rhs
        art = [ZERO] * m
        art[i] = Fraction(1)
        rows.append(coeffs + art + [rhs])
    tab = _Tableau(rows, [n + i for i in range(m)])

    phase1 = [ZERO] * n + [Fraction(1)] * m
    tab.run(phase1, n + m)
    if sum(row[-1] for row, bi in zip(tab.rows, tab.basis) if bi >= n) != 0:
        raise Infeasible("constraints admit no nonnegative solution")

    # drive zero-level artificials out of the basis, dropping redundant rows
    r = 0
    while r < len(tab.rows):
        if tab.basis[r] >= n:
            col = next((j for j in range(n) if tab.rows[r][j] != 0), None)
            if col is None:
                del tab.rows[r]
                del tab.basis[r]
                continue
            tab.pivot(r, col)
        r += 1

    tab.rows = [row[:n] + [row[-1]] for row in tab.rows]
    tab.run(c, n)
    x = [ZERO] * n
    for row, bi in zip(tab.rows, tab.basis):
        x[bi] = row[-1]
    value = sum((ci * xi for ci, xi in zip(c, x)), ZERO)
    return LPResult(value, tuple(x), tab.pivots)
