"""Exact rational linear algebra: Gauss-Jordan solving and a phase-1 simplex
for the feasibility of {A x = b, x >= 0}, with Farkas certificates.

The simplex minimizes the sum of one artificial variable per row (rows are
sign-normalized so the right-hand side is nonnegative).  Bland's smallest
index rule is used for both the entering and the leaving choice, so the
pivoting cannot cycle and terminates on every input.  With exact Fractions
the optimum of zero is detected exactly, never within a tolerance.

If the optimum is positive the system is infeasible and the dual vector of
the phase-1 optimum is returned: a y with y^T A <= 0 componentwise and
y^T b > 0, which is a self-contained contradiction with x >= 0.
`farkas_contradiction` re-checks a certificate mechanically, independent of
how it was produced.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import DomainError

_ZERO = Fraction(0)
_ONE = Fraction(1)


def solve_linear(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> tuple[Fraction, ...] | None:
    """One exact solution of a (possibly redundant) linear system, or None.

    Free variables are set to zero; inconsistent systems return None.
    """
    m = len(rows)
    if m != len(rhs):
        raise DomainError("rhs length does not match row count")
    n = len(rows[0]) if m else 0
    aug = [[Fraction(e) for e in row] + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    if any(len(row) != n + 1 for row in aug):
        raise DomainError("ragged coefficient matrix")

    pivot_cols: list[int] = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, m) if aug[i][col] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        factor = aug[r][col]
        aug[r] = [e / factor for e in aug[r]]
        for i in range(m):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivot_cols.append(col)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n] != 0:
            return None
    x = [_ZERO] * n
    for k, col in enumerate(pivot_cols):
        x[col] = aug[k][n]
    return tuple(x)


def solve_linear_fraction_free(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> tuple[Fraction, ...] | None:
    """Same contract as `solve_linear`, via Bareiss elimination.

    Rows are scaled to integers, the forward sweep uses the fraction-free
    one-step recurrence (every intermediate value is a minor of the scaled
    system, so the divisions are exact and no gcd is ever taken), and the
    triangular system is back-substituted in rationals.  Much faster than
    Gauss-Jordan on Fractions for the dense systems the stationary solver
    produces.
    """
    m = len(rows)
    if m != len(rhs):
        raise DomainError("rhs length does not match row count")
    n = len(rows[0]) if m else 0
    aug: list[list[int]] = []
    for i, row in enumerate(rows):
        if len(row) != n:
            raise DomainError("ragged coefficient matrix")
        entries = [Fraction(e) for e in row] + [Fraction(rhs[i])]
        scale = 1
        for e in entries:
            scale = scale * e.denominator // gcd(scale, e.denominator)
        aug.append([int(e * scale) for e in entries])

    pivots: list[tuple[int, int]] = []
    prev = 1
    r = 0
    for col in range(n):
        pivot_row = next((i for i in range(r, m) if aug[i][col] != 0), None)
        if pivot_row is None:
            continue
        aug[r], aug[pivot_row] = aug[pivot_row], aug[r]
        piv = aug[r][col]
        for i in range(r + 1, m):
            head = aug[i][col]
            row_i = aug[i]
            row_r = aug[r]
            if head:
                for j in range(col + 1, n + 1):
                    row_i[j] = (row_i[j] * piv - head * row_r[j]) // prev
                row_i[col] = 0
            elif prev != 1 or piv != 1:
                for j in range(col + 1, n + 1):
                    row_i[j] = row_i[j] * piv // prev
        pivots.append((r, col))
        prev = piv
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n] != 0:
            return None
    x = [_ZERO] * n
    for row, col in reversed(pivots):
        acc = Fraction(aug[row][n])
        for j in range(col + 1, n):
            if aug[row][j] and x[j]:
                acc -= aug[row][j] * x[j]
        x[col] = acc / aug[row][col]
    return tuple(x)


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    solution: tuple[Fraction, ...] | None
    certificate: tuple[Fraction, ...] | None


def feasible_point(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> FeasibilityResult:
    """Decide {A x = b, x >= 0} exactly.

    Feasible systems yield a basic feasible solution (a vertex of the
    polytope); infeasible ones yield a Farkas certificate against the
    original, un-normalized rows.
    """
    m = len(rows)
    if m != len(rhs):
        raise DomainError("rhs length does not match row count")
    n = len(rows[0]) if m else 0
    if m == 0:
        return FeasibilityResult(True, (), None)

    flipped = [rhs[i] < 0 for i in range(m)]
    tab: list[list[Fraction]] = []
    for i in range(m):
        row = [Fraction(e) for e in rows[i]]
        b = Fraction(rhs[i])
        if len(row) != n:
            raise DomainError("ragged coefficient matrix")
        if flipped[i]:
            row = [-e for e in row]
            b = -b
        art = [_ZERO] * m
        art[i] = _ONE
        tab.append(row + art + [b])

    basis = [n + i for i in range(m)]
    # reduced costs for minimizing the artificial sum; artificial columns
    # start basic, so their reduced costs are zero
    zrow = [
        -sum(tab[i][j] for i in range(m)) if j < n else _ZERO for j in range(n + m)
    ]
    zrow.append(-sum(tab[i][n + m] for i in range(m)))

    width = n + m
    while True:
        enter = next((j for j in range(width) if zrow[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            coeff = tab[i][enter]
            if coeff > 0:
                ratio = tab[i][width] / coeff
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i] < basis[leave])
                ):
                    best = ratio
                    leave = i
        if leave is None:
            raise AssertionError("phase-1 objective is bounded; no leaving row found")
        pivot = tab[leave][enter]
        tab[leave] = [e / pivot for e in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [a - f * b for a, b in zip(tab[i], tab[leave])]
        if zrow[enter] != 0:
            f = zrow[enter]
            zrow = [a - f * b for a, b in zip(zrow, tab[leave])]
        basis[leave] = enter

    objective = -zrow[width]
    if objective == 0:
        x = [_ZERO] * n
        for i, var in enumerate(basis):
            if var < n:
                x[var] = tab[i][width]
        return FeasibilityResult(True, tuple(x), None)

    # dual value of row i: artificial i has cost 1 and column e_i, so its
    # reduced cost is 1 - y_i
    y = [ _ONE - zrow[n + i] for i in range(m)]
    y = [-yi if flipped[i] else yi for i, yi in enumerate(y)]
    return FeasibilityResult(False, None, tuple(y))


def farkas_contradiction(
    rows: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
    certificate: Sequence[Fraction],
) -> bool:
    """True when y^T A <= 0 componentwise while y^T b > 0."""
    m = len(rows)
    if len(certificate) != m or m != len(rhs):
        return False
    n = len(rows[0]) if m else 0
    for j in range(n):
        if sum(certificate[i] * rows[i][j] for i in range(m)) > 0:
            return False
    return sum(certificate[i] * rhs[i] for i in range(m)) > 0
