"""Phase-1 simplex over exact rationals.

Only feasibility is needed: minimise the sum of artificial variables with
Bland's rule (guaranteed termination) and report a feasible point when the
optimum is zero.  Free variables are split into differences of
non-negative pairs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Row = Sequence[Fraction]


def find_feasible_point(
    n_vars: int,
    equalities: Sequence[tuple[Row, Fraction]],
    inequalities: Sequence[tuple[Row, Fraction]],
) -> list[Fraction] | None:
    """A point satisfying A_eq x = b_eq and A_ub x <= b_ub, or None.

    Variables are unrestricted in sign.  All arithmetic is exact.
    """
    zero = Fraction(0)
    one = Fraction(1)

    # columns: u_0..u_{n-1}, v_0..v_{n-1} (x = u - v), then slacks
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    slack_cols: list[int | None] = []
    n_slack = len(inequalities)
    width = 2 * n_vars + n_slack

    def expand(coeffs: Row) -> list[Fraction]:
        row = [zero] * width
        for i, a in enumerate(coeffs):
            if a:
                row[i] = Fraction(a)
                row[n_vars + i] = -Fraction(a)
        return row

    for coeffs, b in equalities:
        rows.append(expand(coeffs))
        rhs.append(Fraction(b))
        slack_cols.append(None)
    for k, (coeffs, b) in enumerate(inequalities):
        row = expand(coeffs)
        row[2 * n_vars + k] = one
        rows.append(row)
        rhs.append(Fraction(b))
        slack_cols.append(2 * n_vars + k)

    m = len(rows)
    basis: list[int] = []
    art_cols: list[int] = []
    for r in range(m):
        if rhs[r] < 0:
            rows[r] = [-a for a in rows[r]]
            rhs[r] = -rhs[r]
            slack_cols[r] = None  # slack coefficient became -1
        sc = slack_cols[r]
        if sc is not None:
            basis.append(sc)
        else:
            col = width + len(art_cols)
            art_cols.append(col)
            basis.append(col)
    total = width + len(art_cols)
    for r in range(m):
        rows[r] = rows[r] + [zero] * len(art_cols)
        if basis[r] >= width:
            rows[r][basis[r]] = one

    # objective: minimise the sum of artificials, expressed in reduced form
    cost = [zero] * total
    obj = zero
    for r in range(m):
        if basis[r] >= width:
            for j in range(total):
                cost[j] -= rows[r][j]
            obj -= rhs[r]
    for c in art_cols:
        cost[c] += one

    while True:
        enter = next((j for j in range(total) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for r in range(m):
            a = rows[r][enter]
            if a > 0:
                ratio = rhs[r] / a
                key = (ratio, basis[r])
                if best is None or key < best:
                    best = key
                    leave = r
        if leave is None:  # pragma: no cover - phase-1 objective is bounded
            return None
        piv = rows[leave][enter]
        rows[leave] = [a / piv for a in rows[leave]]
        rhs[leave] /= piv
        for r in range(m):
            if r != leave and rows[r][enter]:
                f = rows[r][enter]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[leave])]
                rhs[r] -= f * rhs[leave]
        if cost[enter]:
            f = cost[enter]
            cost = [a - f * b for a, b in zip(cost, rows[leave])]
            obj -= f * rhs[leave]
        basis[leave] = enter

    if obj != 0:
        return None
    values = [zero] * total
    for r in range(m):
        values[basis[r]] = rhs[r]
    return [values[i] - values[n_vars + i] for i in range(n_vars)]
