"""Exhaustive vertex enumeration and the combinatorial vertex-edge graph."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from . import _kernels
from .exact import _integer_row, solve
from .hrep import HPolytope, VertexRecord

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    """The instance is too large for exhaustive enumeration; use targeted mode."""


@dataclass(frozen=True)
class VertexGraph:
    vertices: tuple
    edges: frozenset

    def neighbors(self, i: int) -> list[int]:
        return sorted(self._adj[i])

    @property
    def _adj(self) -> dict:
        adj = self.__dict__.get("_adj_cache")
        if adj is None:
            adj = {i: set() for i in range(len(self.vertices))}
            for a, b in self.edges:
                adj[a].add(b)
                adj[b].add(a)
            object.__setattr__(self, "_adj_cache", adj)
        return adj

    def degree(self, i: int) -> int:
        return len(self._adj[i])

    def index_of(self, coords) -> int:
        coords = tuple(coords)
        for i, v in enumerate(self.vertices):
            if v.coords == coords:
                return i
        raise KeyError("point is not a vertex of this graph")


def candidate_subsets(P: HPolytope) -> int:
    return comb(P.n, P.dim)


def enumerate_vertices(P: HPolytope, budget: int = DEFAULT_BUDGET, backend: str | None = None) -> list[VertexRecord]:
    """All vertices of P, sorted lexicographically by exact coordinates."""
    d, n = P.dim, P.n
    total = comb(n, d)
    if total > budget:
        raise BudgetExceeded(f"C({n},{d}) = {total} candidate subsets exceeds budget {budget}")
    if d == 0:
        return [VertexRecord((Fraction(1),), frozenset(P.labels))]
    int_rows = [_integer_row(h) for h in P.normals]
    F = _kernels.float_rows(P.normals)
    subsets, points, unresolved = _kernels.subset_scan(int_rows, F, d, backend)
    log.debug("%d candidate bases from %d subsets", len(subsets), total)

    found: dict[tuple, int] = {}
    masks = np.zeros(64, dtype=object)
    nfound = 0
    last = 0
    big = n > 64
    fmask = np.zeros(16, dtype=np.uint64) if not big else None
    for S in subsets:
        smask = 0
        for i in S:
            smask |= 1 << int(i)
        if nfound and (last & smask) == smask:
            continue
        if nfound:
            if big:
                if any((masks[k] & smask) == smask for k in range(nfound)):
                    continue
            else:
                sm = np.uint64(smask)
                if np.any((fmask[:nfound] & sm) == sm):
                    continue
        rows = [P.normals[int(i)] for i in S]
        x = solve([r[1:] for r in rows], [-r[0] for r in rows])
        if x is None:
            continue
        v = (Fraction(1),) + x
        sl = P.slacks(v)
        if any(s < 0 for s in sl):
            continue
        if v in found:
            continue
        inc = 0
        for i, s in enumerate(sl):
            if s == 0:
                inc |= 1 << i
        if nfound == len(masks):
            masks = np.concatenate([masks, np.zeros(len(masks), dtype=object)])
        masks[nfound] = inc
        if not big:
            if nfound == len(fmask):
                fmask = np.concatenate([fmask, np.zeros(len(fmask), dtype=np.uint64)])
            fmask[nfound] = np.uint64(inc)
        found[v] = inc
        nfound += 1
        last = inc
    out = [VertexRecord(v, P.labels_of(m)) for v, m in found.items()]
    out.sort(key=lambda r: r.coords)
    return out


def adjacency_graph(P: HPolytope, vertices, backend: str | None = None) -> VertexGraph:
    """Join two vertices iff the face on their common facets has only them as vertices."""
    verts = tuple(vertices)
    masks = [P.mask(v.incident) for v in verts]
    edges = _kernels.adjacency(masks, P.dim, backend)
    return VertexGraph(verts, frozenset(edges))


def is_simple_vertex(P: HPolytope, v: VertexRecord) -> bool:
    return len(v.incident) == P.dim


def vertex_graph(P: HPolytope, budget: int = DEFAULT_BUDGET, backend: str | None = None) -> VertexGraph:
    return adjacency_graph(P, enumerate_vertices(P, budget, backend), backend)
