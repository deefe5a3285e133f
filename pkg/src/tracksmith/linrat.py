"""Exact linear algebra and a tiny simplex over the rationals.

Everything here works on fractions.Fraction so that switch conditions,
norm gauges and feasibility questions are decided with zero tolerance.
Problem sizes in this package are tiny (tens of variables), so the
implementation favours clarity over speed.  Bland's rule keeps the simplex
free of cycling.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]
Vector = list[Fraction]


def _frac_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot column indices."""
    m = _frac_matrix(rows)
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot_row = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = Fraction(1) / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                factor = m[i][col]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of {x : rows . x = 0} in R^ncols."""
    if not rows:
        return [[Fraction(i == j) for i in range(ncols)] for j in range(ncols)]
    m, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis: list[Vector] = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for r, p in enumerate(pivots):
            vec[p] = -m[r][f]
        basis.append(vec)
    return basis


def matrix_rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def solve_linear(rows: Sequence[Sequence], rhs: Sequence) -> Vector | None:
    """One solution of rows . x = rhs, or None if inconsistent."""
    if not rows:
        return []
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    m, pivots = rref(aug)
    ncols = len(rows[0])
    for row in m:
        if all(x == 0 for x in row[:ncols]) and row[ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for r, p in enumerate(pivots):
        if p == ncols:
            return None
        x[p] = m[r][ncols]
    return x


def simplex_min(A: Sequence[Sequence], b: Sequence, c: Sequence) -> tuple[str, Vector]:
    """Minimize c.x subject to A x = b, x >= 0 (two-phase, Bland's rule).

    Returns ("optimal", x), ("infeasible", []) or ("unbounded", []).
    """
    A = _frac_matrix(A)
    b = [Fraction(x) for x in b]
    c = [Fraction(x) for x in c]
    m, n = len(A), (len(A[0]) if A else len(c))
    for i in range(m):
        if b[i] < 0:
            A[i] = [-x for x in A[i]]
            b[i] = -b[i]

    # Phase 1 tableau with one artificial variable per row.
    tab = [A[i] + [Fraction(i == j) for j in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]

    def pivot(tab: Matrix, basis: list[int], row: int, col: int) -> None:
        inv = Fraction(1) / tab[row][col]
        tab[row] = [x * inv for x in tab[row]]
        for i in range(len(tab)):
            if i != row and tab[i][col] != 0:
                f = tab[i][col]
                tab[i] = [a - f * p for a, p in zip(tab[i], tab[row])]
        basis[row] = col

    def run(tab: Matrix, basis: list[int], cost: Vector) -> str:
        width = len(tab[0]) - 1 if tab else 0
        while True:
            # Reduced costs under the current basis.
            red = list(cost) + [Fraction(0)]
            for i, bi in enumerate(basis):
                if cost[bi] != 0:
                    f = cost[bi]
                    red = [a - f * p for a, p in zip(red, tab[i] + [Fraction(0)])]
                    red[-1] += f * tab[i][-1]
            enter = next((j for j in range(width) if red[j] < 0), None)
            if enter is None:
                return "optimal"
            best: tuple[Fraction, int, int] | None = None
            for i in range(len(tab)):
                if tab[i][enter] > 0:
                    ratio = tab[i][-1] / tab[i][enter]
                    key = (ratio, basis[i], i)
                    if best is None or key < best:
                        best = key
            if best is None:
                return "unbounded"
            pivot(tab, basis, best[2], enter)

    art_cost = [Fraction(0)] * n + [Fraction(1)] * m
    run(tab, basis, art_cost)
    value = sum(tab[i][-1] for i in range(m) if basis[i] >= n)
    if value != 0:
        return "infeasible", []
    # Drive remaining artificials out of the basis where possible.
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if tab[i][j] != 0), None)
            if col is not None:
                pivot(tab, basis, i, col)
    keep = [i for i in range(m) if basis[i] < n]
    tab = [tab[i][:n] + [tab[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]

    status = run(tab, basis, c)
    if status != "optimal":
        return status, []
    x = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        x[bi] = tab[i][-1]
    return "optimal", x


def feasible_positive(rows: Sequence[Sequence], ncols: int) -> Vector | None:
    """A strictly positive rational x with rows . x = 0, if one exists.

    Scales the problem so strict positivity becomes x >= 1 componentwise,
    which is safe because the solution set is a cone.
    """
    basis = nullspace(rows, ncols)
    if not basis:
        return None
    k = len(basis)
    # Find t with sum_j basis[j] * t_j >= 1: write t = u - v and add slacks.
    A: Matrix = []
    for i in range(ncols):
        row = [basis[j][i] for j in range(k)]
        row += [-basis[j][i] for j in range(k)]
        row += [Fraction(-(i == s)) for s in range(ncols)]
        A.append(row)
    b = [Fraction(1)] * ncols
    c = [Fraction(0)] * (2 * k + ncols)
    status, x = simplex_min(A, b, c)
    if status != "optimal":
        return None
    t = [x[j] - x[k + j] for j in range(k)]
    out = [sum(basis[j][i] * t[j] for j in range(k)) for i in range(ncols)]
    assert all(v >= 1 for v in out)
    return out


def max_support_nonneg(rows: Sequence[Sequence], ncols: int) -> Vector:
    """Nonnegative solution of rows . x = 0 positive on every coordinate
    that any nonnegative solution can make positive."""
    total = [Fraction(0)] * ncols
    for i in range(ncols):
        if total[i] > 0:
            continue
        # max-support iff x_i can reach 1 while staying in the cone.
        A: Matrix = []
        for row in rows:
            A.append([Fraction(x) for x in row] + [Fraction(0)])
        pin = [Fraction(0)] * (ncols + 1)
        pin[i] = Fraction(1)
        pin[ncols] = Fraction(-1)
        A.append(pin)
        b = [Fraction(0)] * len(rows) + [Fraction(1)]
        c = [Fraction(0)] * (ncols + 1)
        status, x = simplex_min(A, b, c)
        if status == "optimal":
            total = [a + v for a, v in zip(total, x[:ncols])]
    return total
