"""Exact linear algebra over Q: row reduction, rank, null space."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def _copy(m: Sequence[Sequence[Fraction | int]]) -> Matrix:
    return [[Fraction(x) for x in row] for row in m]


def rref(m: Sequence[Sequence[Fraction | int]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot column indices."""
    a = _copy(m)
    if not a:
        return a, []
    rows, cols = len(a), len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][c]
        a[r] = [x / inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: Sequence[Sequence[Fraction | int]]) -> int:
    return len(rref(m)[1])


def kernel_basis(m: Sequence[Sequence[Fraction | int]]) -> list[list[Fraction]]:
    """Basis of the right null space of m, deterministic.

    One vector per free column (ascending), built from the reduced echelon
    form, sign-normalized so the first nonzero entry is positive.  The
    arithmetic is exact: every returned vector annihilates m with no
    tolerance.
    """
    a, pivots = rref(m)
    if not a:
        return []
    cols = len(a[0])
    free = [c for c in range(cols) if c not in pivots]
    basis: list[list[Fraction]] = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -a[row][fc]
        lead = next((x for x in v if x != 0), Fraction(1))
        if lead < 0:
            v = [-x for x in v]
        basis.append(v)
    return basis


def mat_vec(m: Sequence[Sequence[Fraction | int]], v: Sequence[Fraction | int]) -> list[Fraction]:
    return [sum((Fraction(x) * Fraction(y) for x, y in zip(row, v)), Fraction(0))
            for row in m]
