"""Exact rational scalars and dense matrices.

Rationals are :class:`fractions.Fraction` values, which are canonical on
construction.  Elimination is done fraction-free on integer rows (each row
cleared of denominators first), so intermediate values stay integers.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence

Rational = Fraction

_RATIONAL_RE = re.compile(r"^([+-]?)(\d+)(?:/(\d+))?$")


class RationalFormatError(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    """Parse ``"3/2000"``, ``"-27"``, ``"+5"``; decimal points are rejected."""
    if not isinstance(text, str):
        raise RationalFormatError(f"expected a rational string, got {text!r}")
    m = _RATIONAL_RE.match(text.strip())
    if m is None:
        raise RationalFormatError(f"malformed rational {text!r}")
    sign, num, den = m.groups()
    den_i = int(den) if den is not None else 1
    if den_i == 0:
        raise RationalFormatError(f"zero denominator in {text!r}")
    value = Fraction(int(num), den_i)
    return -value if sign == "-" else value


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class QMatrix:
    """Immutable dense matrix of rationals, stored row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable], cols: Optional[int] = None):
        rows = tuple(tuple(as_rational(x) for x in row) for row in data)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix rows")
        self._data = rows
        self.rows = len(rows)
        self.cols = cols

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls([[0] * cols for _ in range(rows)], cols)

    @property
    def entries(self) -> tuple:
        return tuple(x for row in self._data for x in row)

    def row(self, i: int) -> tuple:
        return self._data[i]

    def __iter__(self):
        return iter(self._data)

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def __eq__(self, other):
        return isinstance(other, QMatrix) and self.cols == other.cols and self._data == other._data

    def __hash__(self):
        return hash((self.cols, self._data))

    def __repr__(self):
        return f"QMatrix({self.rows}x{self.cols})"

    def submatrix(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> "QMatrix":
        rows = range(self.rows) if rows is None else rows
        cols = range(self.cols) if cols is None else cols
        cols = list(cols)
        return QMatrix([[self._data[i][j] for j in cols] for i in rows], len(cols))

    def transpose(self) -> "QMatrix":
        return QMatrix(zip(*self._data), self.rows) if self.rows else QMatrix([], 0)

    def matvec(self, v: Sequence) -> tuple:
        return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in self._data)


def _integer_row(row: Sequence[Fraction]) -> list[int]:
    den = lcm(*(q.denominator for q in row)) if row else 1
    return [q.numerator * (den // q.denominator) for q in row]


def _bareiss(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free forward elimination in place.

    Pivots are taken as the first nonzero entry in column order.  Returns the
    echelon rows (only the first ``len(pivots)`` are meaningful) and the
    pivot columns.
    """
    m = len(rows)
    pivots: list[int] = []
    r = 0
    prev = 1
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
        piv_row = rows[r]
        a = piv_row[c]
        for i in range(r + 1, m):
            row = rows[i]
            b = row[c]
            if b == 0:
                if a != prev:
                    for j in range(c + 1, ncols):
                        row[j] = (a * row[j]) // prev
                continue
            for j in range(c + 1, ncols):
                row[j] = (a * row[j] - b * piv_row[j]) // prev
            row[c] = 0
        prev = a
        pivots.append(c)
        r += 1
    return rows, pivots


def _as_int_rows(M) -> tuple[list[list[int]], int]:
    if isinstance(M, QMatrix):
        return [_integer_row(r) for r in M], M.cols
    rows = [list(r) for r in M]
    ncols = len(rows[0]) if rows else 0
    return [_integer_row([as_rational(x) for x in r]) for r in rows], ncols


def rank(M) -> int:
    """Exact rank over the rationals."""
    rows, ncols = _as_int_rows(M)
    _, pivots = _bareiss(rows, ncols)
    return len(pivots)


def _rref(rows: list[list[int]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    ech, pivots = _bareiss(rows, ncols)
    red = [[Fraction(x) for x in ech[i]] for i in range(len(pivots))]
    for i in range(len(pivots) - 1, -1, -1):
        c = pivots[i]
        inv = 1 / red[i][c]
        red[i] = [x * inv for x in red[i]]
        for k in range(i):
            f = red[k][c]
            if f:
                red[k] = [a - f * b for a, b in zip(red[k], red[i])]
    return red, pivots


def nullspace(M) -> list[tuple[Fraction, ...]]:
    """Exact basis of ``{v : M v = 0}``, one vector per free column."""
    rows, ncols = _as_int_rows(M)
    red, pivots = _rref(rows, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -red[i][f]
        basis.append(tuple(v))
    return basis


def solve(A, b: Sequence) -> Optional[tuple[Fraction, ...]]:
    """Some exact solution of ``A v = b`` (free variables set to 0), or None."""
    if isinstance(A, QMatrix):
        arows = [list(r) for r in A]
        ncols = A.cols
    else:
        arows = [list(map(as_rational, r)) for r in A]
        ncols = len(arows[0]) if arows else 0
    if len(arows) != len(b):
        raise ValueError("row count of A does not match length of b")
    aug = [_integer_row(r + [as_rational(bi)]) for r, bi in zip(arows, b)]
    red, pivots = _rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    v = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        v[c] = red[i][ncols]
    return tuple(v)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))
