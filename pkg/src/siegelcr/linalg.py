"""Exact dense linear algebra on lists of lists.

Entries may be ``Fraction`` or :class:`ComplexRational` (anything with exact
field arithmetic and a truthiness zero test).  Matrices are plain nested
lists, 0-indexed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .algebra import ONE, ZERO, ComplexRational

Matrix = list[list]


def identity(m: int, one=ONE, zero=ZERO) -> Matrix:
    return [[one if i == j else zero for j in range(m)] for i in range(m)]


def zeros(r: int, c: int, zero=ZERO) -> Matrix:
    return [[zero] * c for _ in range(r)]


def transpose(a: Matrix) -> Matrix:
    return [list(row) for row in zip(*a)]


def conj(a: Matrix) -> Matrix:
    return [[x.conj() for x in row] for row in a]


def adjoint(a: Matrix) -> Matrix:
    return transpose(conj(a))


def scale(a: Matrix, s) -> Matrix:
    return [[x * s for x in row] for row in a]


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def matmul(a: Matrix, b: Matrix, zero=ZERO) -> Matrix:
    if a and len(a[0]) != len(b):
        raise ValueError(f"shape mismatch: {len(a)}x{len(a[0])} times {len(b)}x{len(b[0]) if b else 0}")
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [zero] * cols
        for k, x in enumerate(row):
            if not x:
                continue
            for j, y in enumerate(b[k]):
                if y:
                    acc[j] = acc[j] + x * y
        out.append(acc)
    return out


def matvec(a: Matrix, v: Sequence, zero=ZERO) -> list:
    return [col[0] for col in matmul(a, [[x] for x in v], zero)]


def is_zero(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def equal(a: Matrix, b: Matrix) -> bool:
    return len(a) == len(b) and all(list(ra) == list(rb) for ra, rb in zip(a, b))


def _row_echelon(a: Matrix):
    """Gaussian elimination; returns (echelon copy, pivot columns, swap parity)."""
    m = [list(row) for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    swaps = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c]), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
            swaps += 1
        inv = 1 / m[r][c] if isinstance(m[r][c], Fraction) else ONE / m[r][c]
        for i in range(r + 1, rows):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots, swaps


def det(a: Matrix):
    n = len(a)
    if n == 0:
        return ONE
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    m, pivots, swaps = _row_echelon(a)
    if len(pivots) < n:
        return m[0][0] * 0
    out = m[0][0]
    for i in range(1, n):
        out = out * m[i][i]
    return -out if swaps % 2 else out


def rank(a: Matrix) -> int:
    if not a:
        return 0
    return len(_row_echelon(a)[1])


def _rref(a: Matrix):
    m, pivots, _ = _row_echelon(a)
    for r in reversed(range(len(pivots))):
        c = pivots[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(r):
            if m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
    return m, pivots


def inverse(a: Matrix, one=ONE, zero=ZERO) -> Matrix:
    n = len(a)
    aug = [list(row) + e for row, e in zip(a, identity(n, one, zero))]
    m, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in m]


def nullspace(a: Matrix, one=ONE, zero=ZERO) -> list[list]:
    """Basis of {x : a x = 0}, one vector per free column."""
    cols = len(a[0]) if a else 0
    m, pivots = _rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * cols
        v[f] = one
        for r, c in enumerate(pivots):
            v[c] = -m[r][f]
        basis.append(v)
    return basis


def leading_minors(a: Matrix) -> list:
    return [det([row[:k] for row in a[:k]]) for k in range(1, len(a) + 1)]


def map_entries(a: Matrix, fn: Callable) -> Matrix:
    return [[fn(x) for x in row] for row in a]


def to_complex_rational(a) -> Matrix:
    return [[ComplexRational.coerce(x) for x in row] for row in a]
