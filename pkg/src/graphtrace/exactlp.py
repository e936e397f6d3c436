"""Exact rational linear algebra and a small two-phase simplex.

All arithmetic is over ``fractions.Fraction``; nothing here ever touches a
float.  Sizes are desk scale (a dozen variables), so the implementations
favor clarity and determinism over asymptotics.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vector = tuple[Fraction, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def solve_exact(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> Vector | None:
    """Solve rows * x = rhs when the solution is unique; otherwise None.

    None covers both inconsistent and underdetermined systems.  The row
    count may exceed the variable count (redundant rows are fine).
    """
    m = len(rows)
    if m != len(rhs):
        raise ValueError("row/rhs length mismatch")
    n = len(rows[0]) if m else 0
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]

    pivot_cols: list[int] = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, m) if aug[i][col] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = 1 / aug[r][col]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][col] != 0:
                factor = aug[i][col]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[r])]
        pivot_cols.append(col)
        r += 1
        if r == m:
            break

    for i in range(r, m):
        if aug[i][n] != 0:
            return None  # inconsistent
    if r < n:
        return None  # underdetermined
    x = [_ZERO] * n
    for i, col in enumerate(pivot_cols):
        x[col] = aug[i][n]
    return tuple(x)


def reduce_to_echelon(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> list[tuple[Vector, Fraction]] | None:
    """Row-reduce an equality system, dropping redundant rows.

    Returns the independent reduced rows with their right-hand sides, or
    None when the system is inconsistent.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, m) if aug[i][col] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        for i in range(m):
            if i != r and aug[i][col] != 0:
                factor = aug[i][col] / aug[r][col]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[r])]
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n] != 0:
            return None
    return [(tuple(row[:n]), row[n]) for row in aug[:r]]


class SimplexError(RuntimeError):
    pass


def simplex_minimize(
    objective: Sequence[Fraction],
    eq_rows: Sequence[Sequence[Fraction]],
    eq_rhs: Sequence[Fraction],
    ge_rows: Sequence[Sequence[Fraction]] = (),
    ge_rhs: Sequence[Fraction] = (),
) -> tuple[Fraction, Vector] | None:
    """Minimize objective . x subject to eq, >=-rows, and x >= 0.

    Returns (minimum, argmin) or None when infeasible.  Two-phase tableau
    simplex with Bland's rule, so it terminates on degenerate polytopes.
    Raises SimplexError on an unbounded objective (impossible for the
    bounded polytopes this package feeds it).
    """
    n = len(objective)

    # Standard form: append one surplus variable per >= row.
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    n_surplus = len(ge_rows)
    for row, b in zip(eq_rows, eq_rhs):
        rows.append(list(row) + [_ZERO] * n_surplus)
        rhs.append(b)
    for i, (row, b) in enumerate(zip(ge_rows, ge_rhs)):
        surplus = [_ZERO] * n_surplus
        surplus[i] = Fraction(-1)
        rows.append(list(row) + surplus)
        rhs.append(b)

    total = n + n_surplus
    m = len(rows)
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-a for a in rows[i]]
            rhs[i] = -rhs[i]

    # Phase 1: artificial variables, minimize their sum.
    tableau = [rows[i] + [_ZERO] * m + [rhs[i]] for i in range(m)]
    for i in range(m):
        tableau[i][total + i] = _ONE
    basis = [total + i for i in range(m)]
    cost = [_ZERO] * total + [_ONE] * m + [_ZERO]
    _run_simplex(tableau, basis, cost)
    if _objective_value(tableau, basis, cost) != 0:
        return None

    # Drive leftover artificials out of the basis; rows where none of the
    # real columns can take over are redundant (0 = 0) and are dropped.
    for i in range(m):
        if basis[i] >= total:
            col = next((j for j in range(total) if tableau[i][j] != 0), None)
            if col is not None:
                _pivot(tableau, basis, i, col)
    keep = [i for i in range(m) if basis[i] < total]
    tableau = [tableau[i][:total] + [tableau[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]

    # Phase 2.
    cost2 = list(objective) + [_ZERO] * n_surplus + [_ZERO]
    _run_simplex(tableau, basis, cost2)
    x = [_ZERO] * total
    for i, b in enumerate(basis):
        x[b] = tableau[i][-1]
    value = sum((c * xi for c, xi in zip(objective, x[:n])), _ZERO)
    return value, tuple(x[:n])


def _objective_value(tableau, basis, cost) -> Fraction:
    return sum((cost[b] * tableau[i][-1] for i, b in enumerate(basis)), _ZERO)


def _run_simplex(tableau, basis, cost) -> None:
    m = len(tableau)
    ncols = len(tableau[0]) - 1
    while True:
        # Reduced costs: c_j - c_B . B^-1 A_j (tableau already holds B^-1 A).
        entering = None
        for j in range(ncols):
            if j in basis:
                continue
            reduced = cost[j] - sum(
                (cost[basis[i]] * tableau[i][j] for i in range(m)), _ZERO
            )
            if reduced < 0:
                entering = j  # Bland: first improving column
                break
        if entering is None:
            return
        leaving = None
        best = None
        for i in range(m):
            coeff = tableau[i][entering]
            if coeff > 0:
                ratio = tableau[i][-1] / coeff
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leaving]
                ):
                    best = ratio
                    leaving = i
        if leaving is None:
            raise SimplexError("objective unbounded below")
        _pivot(tableau, basis, leaving, entering)


def _pivot(tableau, basis, row: int, col: int) -> None:
    inv = 1 / tableau[row][col]
    tableau[row] = [a * inv for a in tableau[row]]
    for i in range(len(tableau)):
        if i != row and tableau[i][col] != 0:
            factor = tableau[i][col]
            tableau[i] = [a - factor * b for a, b in zip(tableau[i], tableau[row])]
    basis[row] = col
