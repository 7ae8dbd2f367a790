"""Exact rational simplex for small linear programs.

Solves max c.y subject to A y <= b, y >= 0 with Fraction arithmetic and
Bland's rule, which guarantees termination without tolerances.  Returns the
optimum together with the dual prices, which downstream code turns into
primal/dual certificates for the fractional covering program.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = ["simplex_max", "SimplexResult"]


class SimplexResult:
    def __init__(self, objective, y, duals):
        self.objective = objective
        self.y = y
        self.duals = duals


def simplex_max(a_rows, b, c, max_pivots=200_000):
    """Maximize c.y s.t. a_rows y <= b, y >= 0; all entries Fraction-able.

    Requires b >= 0 so the slack basis is feasible.  Raises ValueError on an
    unbounded program or pivot budget exhaustion (neither occurs for the
    bounded covering programs this package builds).
    """
    m = len(a_rows)
    n = len(c)
    b = [Fraction(x) for x in b]
    if any(x < 0 for x in b):
        raise ValueError("simplex_max needs b >= 0")
    # Tableau rows: n structural columns, m slack columns, rhs.
    rows = []
    for i in range(m):
        row = [Fraction(x) for x in a_rows[i]] + [Fraction(0)] * m + [b[i]]
        row[n + i] = Fraction(1)
        rows.append(row)
    # Reduced-cost row (maximization); obj tracked separately.
    red = [Fraction(x) for x in c] + [Fraction(0)] * (m + 1)
    basis = [n + i for i in range(m)]

    for _ in range(max_pivots):
        enter = -1
        for j in range(n + m):
            if red[j] > 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            coef = rows[i][enter]
            if coef > 0:
                ratio = rows[i][-1] / coef
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            raise ValueError("unbounded linear program")
        piv = rows[leave][enter]
        rows[leave] = [x / piv for x in rows[leave]]
        for i in range(m):
            if i != leave and rows[i][enter]:
                f = rows[i][enter]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[leave])]
        if red[enter]:
            f = red[enter]
            red = [x - f * y for x, y in zip(red, rows[leave])]
        basis[leave] = enter
    else:
        raise ValueError("pivot budget exhausted")

    y = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        if bi < n:
            y[bi] = rows[i][-1]
    objective = sum(Fraction(ci) * yi for ci, yi in zip(c, y))
    duals = [-red[n + i] for i in range(m)]
    return SimplexResult(objective, y, duals)
