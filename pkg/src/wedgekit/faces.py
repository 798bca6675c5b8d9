"""Face verification and nonsimplicity detection.

A support set ``S`` of facet labels spans the flat ``{v : h.v = 0, h in S}``.
The face it cuts from the polytope is ``F = P & flat(S)``.  ``F`` is a
nonsimplicity of dimension ``k`` when ``S`` is exactly the set of facets
tight on all of ``F`` (maximality), ``dim F = nullity(S) - 1 = k``, no single
facet of ``S`` is rank-essential (affine support), and ``|S| > d - k``.

Two evaluation modes share one vocabulary:

* enumeration mode, given the complete vertex list: closures and boundaries
  are read off vertex incidences;
* targeted mode, for polytopes too large to enumerate: exact LPs over the
  flat decide emptiness, implicit equalities and boundary facets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import lp
from .exact import dot, nullspace, rank
from .hrep import HPolytope, VertexRecord


class FaceError(ValueError):
    pass


class EmptyFaceError(FaceError):
    pass


class NotMaximalError(FaceError):
    def __init__(self, closure: frozenset):
        super().__init__(f"support is not maximal; closure has {len(closure)} facets")
        self.closure = closure


class AffineSupportError(FaceError):
    def __init__(self, essential: frozenset):
        super().__init__(f"affine support violated by {sorted(essential)}")
        self.essential = essential


class BranchBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class FaceRecord:
    support: frozenset
    dim_k: int
    excess: int
    boundary: frozenset
    witness: tuple
    poly_dim: int
    essential: frozenset = field(default_factory=frozenset)

    @property
    def m(self) -> int:
        return len(self.support)

    @property
    def is_nonsimplicity(self) -> bool:
        return self.excess > 0 and not self.essential

    def row(self) -> tuple:
        return (self.dim_k, self.m, self.excess)


def _rows(P: HPolytope, labels: Iterable[str]) -> list:
    return [P.normals[P.index(lab)] for lab in labels]


def support_rank(P: HPolytope, labels: Iterable[str]) -> int:
    rows = _rows(P, labels)
    return rank(rows) if rows else 0


def flat_closure(P: HPolytope, labels: Iterable[str]) -> frozenset:
    """Every facet whose hyperplane contains the flat spanned by ``labels``."""
    labels = frozenset(labels)
    rows = _rows(P, labels)
    if not rows:
        return labels
    basis = nullspace(rows)
    out = set(labels)
    for lab, h in zip(P.labels, P.normals):
        if lab not in out and all(dot(h, v) == 0 for v in basis):
            out.add(lab)
    return frozenset(out)


def rank_essential(P: HPolytope, support: Iterable[str]) -> frozenset:
    """Facets whose removal from the support strictly enlarges the flat."""
    support = frozenset(support)
    full = support_rank(P, support)
    return frozenset(h for h in support if support_rank(P, support - {h}) < full)


def affine_support_check(P: HPolytope, support: Iterable[str]) -> tuple[bool, frozenset]:
    essential = rank_essential(P, support)
    return (not essential, essential)


# -- targeted mode: LPs over the flat -----------------------------------------

def _flat_param(P: HPolytope, labels: frozenset):
    rows = _rows(P, labels)
    if rows:
        return nullspace(rows)
    d = P.dim
    return [tuple(Fraction(int(i == j)) for j in range(d + 1)) for i in range(d + 1)]


def _combine(basis, lam) -> tuple:
    dim = len(basis[0])
    return tuple(sum((l * b[j] for l, b in zip(lam, basis)), Fraction(0)) for j in range(dim))


def _max_min_slack(P: HPolytope, closure: frozenset, basis):
    """Maximize s subject to g.v >= s (g outside closure), v0 = 1, s <= 1."""
    others = [h for lab, h in zip(P.labels, P.normals) if lab not in closure]
    k = len(basis)
    gN = [[dot(h, b) for b in basis] for h in others]
    A = [row + [Fraction(-1)] for row in gN]
    senses = [">="] * len(A)
    rhs = [Fraction(0)] * len(A)
    A.append([b[0] for b in basis] + [Fraction(0)])
    senses.append("=")
    rhs.append(Fraction(1))
    A.append([Fraction(0)] * k + [Fraction(1)])
    senses.append("<=")
    rhs.append(Fraction(1))
    res = lp.maximize([0] * k + [1], A, senses, rhs, free=range(k + 1))
    if res.status == lp.INFEASIBLE:
        return None, None
    lam, s = res.x[:k], res.x[k]
    return _combine(basis, lam), s


def _extreme_over_face(P: HPolytope, basis, objective, minimize=False) -> Optional[Fraction]:
    k = len(basis)
    A = [[dot(h, b) for b in basis] for h in P.normals]
    senses = [">="] * len(A)
    rhs = [Fraction(0)] * len(A)
    A.append([b[0] for b in basis])
    senses.append("=")
    rhs.append(Fraction(1))
    c = [dot(objective, b) for b in basis]
    if minimize:
        c = [-x for x in c]
    res = lp.maximize(c, A, senses, rhs, free=range(k))
    if res.status != lp.OPTIMAL:
        return None
    return -res.value if minimize else res.value


def face_hull(P: HPolytope, tight: Iterable[str]) -> tuple[frozenset, tuple]:
    """Tight set of the face cut by ``tight`` and a relative-interior point.

    Raises EmptyFaceError if the flat misses the polytope.
    """
    closure = flat_closure(P, tight)
    while True:
        basis = _flat_param(P, closure)
        pt, s = _max_min_slack(P, closure, basis)
        if pt is None:
            raise EmptyFaceError("the supporting flat does not meet the polytope")
        if s > 0 or len(closure) == P.n:
            return closure, pt
        # some facet is forced tight on the face: find the implicit equalities
        extra = set()
        for lab, h in zip(P.labels, P.normals):
            if lab in closure:
                continue
            top = _extreme_over_face(P, basis, h)
            if top == 0:
                extra.add(lab)
        if not extra:  # pragma: no cover - would contradict LP duality
            raise AssertionError("zero min-slack without an implicit equality")
        closure = flat_closure(P, closure | extra)


def relative_interior_point(P: HPolytope, tight: Iterable[str]) -> Optional[tuple]:
    """A point of the face with ``tight`` at equality and every other facet positive.

    Returns None when the face is nonempty but every point of it makes some
    further facet tight (the true support is larger).  Raises EmptyFaceError
    when ``tight`` cuts out nothing.
    """
    tight = frozenset(tight)
    closure = flat_closure(P, tight)
    if closure != tight:
        basis = _flat_param(P, closure)
        pt, _ = _max_min_slack(P, closure, basis)
        if pt is None:
            raise EmptyFaceError("the supporting flat does not meet the polytope")
        return None
    basis = _flat_param(P, closure)
    pt, s = _max_min_slack(P, closure, basis)
    if pt is None:
        raise EmptyFaceError("the supporting flat does not meet the polytope")
    if s > 0 or closure == frozenset(P.labels):
        return pt
    return None


def boundary_facets(P: HPolytope, closure: frozenset) -> frozenset:
    """Facets vanishing somewhere on the face but not on its affine hull (LP mode)."""
    basis = _flat_param(P, closure)
    out = set()
    for lab, h in zip(P.labels, P.normals):
        if lab in closure:
            continue
        low = _extreme_over_face(P, basis, h, minimize=True)
        if low == 0:
            out.add(lab)
    return frozenset(out)


# -- enumeration mode ----------------------------------------------------------

class VertexIndex:
    """Incidence bitmasks of a complete vertex list, for fast face queries."""

    def __init__(self, P: HPolytope, vertices: Sequence[VertexRecord]):
        self.P = P
        self.vertices = list(vertices)
        self.masks = [P.mask(v.incident) for v in self.vertices]

    def face_vertices(self, smask: int) -> list[int]:
        return [i for i, m in enumerate(self.masks) if m & smask == smask]

    def closure_mask(self, smask: int) -> int:
        members = self.face_vertices(smask)
        if not members:
            raise EmptyFaceError("no vertex lies on the supporting flat")
        out = -1
        for i in members:
            out &= self.masks[i]
        return out

    def record(self, P: HPolytope, support: frozenset) -> FaceRecord:
        smask = P.mask(support)
        members = self.face_vertices(smask)
        union = 0
        for i in members:
            union |= self.masks[i]
        d = P.dim
        r = support_rank(P, support)
        k = d - r
        witness = tuple(
            sum((self.vertices[i].coords[j] for i in members), Fraction(0)) / len(members) for j in range(d + 1)
        )
        return FaceRecord(
            support=frozenset(support),
            dim_k=k,
            excess=len(support) - (d - k),
            boundary=P.labels_of(union & ~smask),
            witness=witness,
            poly_dim=d,
            essential=rank_essential(P, support),
        )


def maximality_closure(P: HPolytope, support: Iterable[str], vertices: Sequence[VertexRecord] | None = None) -> frozenset:
    """The full tight set of the face carried by ``support``."""
    support = frozenset(support)
    if vertices is not None:
        idx = VertexIndex(P, vertices)
        return P.labels_of(idx.closure_mask(P.mask(support)))
    closure, _ = face_hull(P, support)
    return closure


def face_dimension(P: HPolytope, tight: Iterable[str], vertices: Sequence[VertexRecord] | None = None) -> int:
    closure = maximality_closure(P, tight, vertices)
    return P.dim - support_rank(P, closure)


def measure_face(P: HPolytope, support: Iterable[str], vertices: Sequence[VertexRecord] | None = None) -> FaceRecord:
    """FaceRecord for a maximal support, recording (not raising) essential facets.

    Raises EmptyFaceError, or NotMaximalError carrying the closure.
    """
    support = frozenset(support)
    unknown = [lab for lab in support if lab not in P]
    if unknown:
        raise KeyError(f"unknown facet labels {sorted(unknown)}")
    if vertices is not None:
        idx = VertexIndex(P, vertices)
        closure = P.labels_of(idx.closure_mask(P.mask(support)))
        if closure != support:
            raise NotMaximalError(closure)
        return idx.record(P, support)
    closure, witness = face_hull(P, support)
    if closure != support:
        raise NotMaximalError(closure)
    d = P.dim
    k = d - support_rank(P, support)
    return FaceRecord(
        support=support,
        dim_k=k,
        excess=len(support) - (d - k),
        boundary=boundary_facets(P, support),
        witness=witness,
        poly_dim=d,
        essential=rank_essential(P, support),
    )


def verify_nonsimplicity(P: HPolytope, support: Iterable[str], vertices: Sequence[VertexRecord] | None = None) -> FaceRecord:
    """Check nonempty intersection, maximality and affine support; return the record.

    The returned record may have excess 0 (a face that used to be a
    nonsimplicity); callers wanting only genuine nonsimplicities check
    ``record.is_nonsimplicity``.
    """
    rec = measure_face(P, support, vertices)
    if rec.essential:
        raise AffineSupportError(rec.essential)
    return rec


def find_nonsimplicities(P: HPolytope, vertices: Sequence[VertexRecord], max_branches: int = 10**6) -> list[FaceRecord]:
    """All nonsimplicities reachable from nonsimple vertices.

    From each nonsimple vertex, rank-essential facets are removed one at a
    time and the remainder re-closed, until affine support holds.
    """
    d = P.dim
    idx = VertexIndex(P, vertices)
    explored: set[int] = set()
    found: dict[int, FaceRecord] = {}
    rank_cache: dict[int, int] = {}

    def mrank(mask: int) -> int:
        r = rank_cache.get(mask)
        if r is None:
            rows = [P.normals[i] for i in range(P.n) if mask >> i & 1]
            r = rank(rows) if rows else 0
            rank_cache[mask] = r
        return r

    for vi, vmask in enumerate(idx.masks):
        if bin(vmask).count("1") <= d:
            continue
        stack = [vmask]
        while stack:
            smask = stack.pop()
            if smask in explored:
                continue
            explored.add(smask)
            if len(explored) > max_branches:
                raise BranchBudgetExceeded(f"more than {max_branches} supports explored")
            full = mrank(smask)
            essential = [i for i in range(P.n) if smask >> i & 1 and mrank(smask & ~(1 << i)) < full]
            if not essential:
                m = bin(smask).count("1")
                k = d - full
                if m - (d - k) > 0 and smask not in found:
                    found[smask] = idx.record(P, P.labels_of(smask))
                continue
            for i in reversed(essential):
                stack.append(idx.closure_mask(smask & ~(1 << i)))
    return sorted(found.values(), key=lambda r: (sorted(P.index(l) for l in r.support)))


def ascend_to_support(P: HPolytope, tight: Iterable[str], max_steps: int = 1000) -> FaceRecord:
    """Targeted counterpart of the walk: climb from one tight set by LP closures.

    Drops every rank-essential facet at once (coloops are jointly
    independent, so the excess is unchanged), re-closes, and repeats until
    affine support holds.  A simple face (no dependency among its facets)
    is returned as is, since every facet of it is a coloop.
    """
    support, _ = face_hull(P, tight)
    for _ in range(max_steps):
        if rank([P.normal(g) for g in support]) == len(support):
            return measure_face(P, support)
        essential = rank_essential(P, support)
        if not essential:
            return measure_face(P, support)
        support, _ = face_hull(P, support - essential)
    raise BranchBudgetExceeded(f"no affinely supported face within {max_steps} steps")
