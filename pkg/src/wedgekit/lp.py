"""Dense two-phase simplex over the rationals (Bland's rule, no cycling)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exact import as_rational

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class LPProblem:
    """maximize ``objective . x`` subject to row constraints.

    ``senses`` holds one of ``"<="``, ``">="``, ``"="`` per row.  Variables
    listed in ``free`` are unrestricted in sign; all others are ``>= 0``.
    """

    objective: tuple
    matrix: tuple
    senses: tuple
    rhs: tuple
    free: frozenset = field(default_factory=frozenset)

    @classmethod
    def build(cls, objective, matrix, senses, rhs, free=()):
        return cls(
            tuple(as_rational(c) for c in objective),
            tuple(tuple(as_rational(a) for a in row) for row in matrix),
            tuple(senses),
            tuple(as_rational(b) for b in rhs),
            frozenset(free),
        )


@dataclass(frozen=True)
class LPResult:
    status: str
    x: Optional[tuple] = None
    value: Optional[Fraction] = None


def _pivot(T: list[list[Fraction]], r: int, c: int) -> None:
    prow = T[r]
    inv = _ONE / prow[c]
    if inv != 1:
        prow = [a * inv for a in prow]
        T[r] = prow
    nz = [(j, a) for j, a in enumerate(prow) if a]
    for i, row in enumerate(T):
        if i == r:
            continue
        f = row[c]
        if f:
            for j, a in nz:
                row[j] -= f * a


def _run(T: list[list[Fraction]], basis: list[int], obj: int, allowed: int) -> bool:
    """Maximize on tableau T whose row ``obj`` holds reduced costs (negated).

    Column entering condition: objective-row entry < 0.  Only the first
    ``allowed`` columns may enter.  Returns False when unbounded.
    """
    m = len(basis)
    rhs = len(T[0]) - 1
    zrow = T[obj]
    while True:
        enter = next((j for j in range(allowed) if zrow[j] < 0), None)
        if enter is None:
            return True
        best = None
        leave = -1
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][rhs] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return False
        _pivot(T, leave, enter)
        basis[leave] = enter
        zrow = T[obj]


def solve_lp(problem: LPProblem) -> LPResult:
    c = problem.objective
    nvar = len(c)
    # column map: each original var -> (plus col, minus col or None)
    cols: list[tuple[int, Optional[int]]] = []
    k = 0
    for j in range(nvar):
        if j in problem.free:
            cols.append((k, k + 1))
            k += 2
        else:
            cols.append((k, None))
            k += 1
    nstruct = k

    rows = []
    for row, sense, b in zip(problem.matrix, problem.senses, problem.rhs):
        expanded = [_ZERO] * nstruct
        for j, a in enumerate(row):
            if a:
                p, q = cols[j]
                expanded[p] = a
                if q is not None:
                    expanded[q] = -a
        if b < 0:
            expanded = [-a for a in expanded]
            b = -b
            sense = {"<=": ">=", ">=": "<=", "=": "="}[sense]
        rows.append((expanded, sense, b))

    m = len(rows)
    nslack = sum(1 for _, s, _ in rows if s != "=")
    nart = sum(1 for _, s, _ in rows if s != "<=")
    width = nstruct + nslack + nart + 1
    T: list[list[Fraction]] = []
    basis: list[int] = []
    si = nstruct
    ai = nstruct + nslack
    art_rows = []
    for expanded, sense, b in rows:
        line = expanded + [_ZERO] * (nslack + nart) + [b]
        if sense == "<=":
            line[si] = _ONE
            basis.append(si)
            si += 1
        elif sense == ">=":
            line[si] = -_ONE
            si += 1
            line[ai] = _ONE
            basis.append(ai)
            art_rows.append(len(T))
            ai += 1
        else:
            line[ai] = _ONE
            basis.append(ai)
            art_rows.append(len(T))
            ai += 1
        T.append(line)

    first_art = nstruct + nslack
    if nart:
        # phase 1: maximize -(sum of artificials)
        z = [_ZERO] * width
        for j in range(first_art, first_art + nart):
            z[j] = _ONE
        for i in art_rows:
            z = [a - b for a, b in zip(z, T[i])]
        T.append(z)
        _run(T, basis, m, first_art + nart)
        if T[m][-1] != 0:
            return LPResult(INFEASIBLE)
        T.pop()
        # drive artificials out of the basis
        for i in range(m - 1, -1, -1):
            if basis[i] >= first_art:
                j = next((j for j in range(first_art) if T[i][j] != 0), None)
                if j is None:
                    T.pop(i)
                    basis.pop(i)
                else:
                    _pivot(T, i, j)
                    basis[i] = j
        m = len(basis)

    z = [_ZERO] * width
    for j in range(nvar):
        p, q = cols[j]
        z[p] = -c[j]
        if q is not None:
            z[q] = c[j]
    for i, bj in enumerate(basis):
        f = z[bj]
        if f:
            z = [a - f * b for a, b in zip(z, T[i])]
    T.append(z)
    if not _run(T, basis, m, first_art):
        return LPResult(UNBOUNDED)

    val = [_ZERO] * width
    for i, bj in enumerate(basis):
        val[bj] = T[i][-1]
    x = []
    for j in range(nvar):
        p, q = cols[j]
        x.append(val[p] - (val[q] if q is not None else _ZERO))
    value = sum((a * b for a, b in zip(c, x)), _ZERO)
    return LPResult(OPTIMAL, tuple(x), value)


def maximize(objective: Sequence, matrix: Sequence, senses: Sequence, rhs: Sequence, free=()) -> LPResult:
    return solve_lp(LPProblem.build(objective, matrix, senses, rhs, free))
