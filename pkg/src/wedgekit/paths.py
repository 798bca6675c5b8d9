"""Distances, spindles and nonrevisiting paths on the vertex-edge graph."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .enumeration import VertexGraph
from .hrep import HPolytope, VertexRecord


class DisconnectedGraphError(RuntimeError):
    pass


class NotASpindleError(ValueError):
    pass


class AmbiguousSpindleError(NotASpindleError):
    pass


class StateBudgetExceeded(RuntimeError):
    pass


def bfs_distances(G: VertexGraph, a: int) -> list:
    dist = [None] * len(G.vertices)
    dist[a] = 0
    q = deque([a])
    while q:
        u = q.popleft()
        for w in G.neighbors(u):
            if dist[w] is None:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def distance(G: VertexGraph, a: int, b: int) -> int:
    d = bfs_distances(G, a)[b]
    if d is None:
        raise DisconnectedGraphError(f"vertices {a} and {b} are not connected")
    return d


def shortest_path(G: VertexGraph, a: int, b: int) -> list[int]:
    prev = {a: None}
    q = deque([a])
    while q:
        u = q.popleft()
        if u == b:
            break
        for w in G.neighbors(u):
            if w not in prev:
                prev[w] = u
                q.append(w)
    if b not in prev:
        raise DisconnectedGraphError(f"vertices {a} and {b} are not connected")
    path = [b]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


@dataclass(frozen=True)
class PathState:
    current: int
    seen: int  # bitmask of facets incident somewhere along the path


def step_is_revisit_free(seen: int, inc_u: int, inc_next: int) -> bool:
    """Moving u -> next never returns to a facet the path has already left."""
    return (inc_next & seen & ~inc_u) == 0


def is_nonrevisiting(P: HPolytope, G: VertexGraph, path: list[int]) -> bool:
    masks = [P.mask(G.vertices[i].incident) for i in path]
    seen = masks[0]
    for u, w in zip(masks, masks[1:]):
        if not step_is_revisit_free(seen, u, w):
            return False
        seen |= w
    return True


def nonrevisiting_search(P: HPolytope, G: VertexGraph, a: int, b: int | None = None, max_states: int = 10**7):
    """Depth-first search over (vertex, seen-facets) states.

    Returns ``(witness, longest)``: a revisit-free path from a to b (or None),
    and the longest revisit-free path from a found while exploring.
    """
    masks = [P.mask(v.incident) for v in G.vertices]
    nbrs = [G.neighbors(i) for i in range(len(G.vertices))]
    visited: set = set()
    longest = [a]
    stack = [(a, masks[a], [a])]
    while stack:
        u, seen, path = stack.pop()
        if (u, seen) in visited:
            continue
        visited.add((u, seen))
        if len(visited) > max_states:
            raise StateBudgetExceeded(f"more than {max_states} path states")
        if len(path) > len(longest):
            longest = path
        if u == b:
            return path, longest
        for w in reversed(nbrs[u]):
            if step_is_revisit_free(seen, masks[u], masks[w]):
                stack.append((w, seen | masks[w], path + [w]))
    return None, longest


def nonrevisiting_path_exists(P: HPolytope, G: VertexGraph, a: int, b: int, max_states: int = 10**7):
    witness, _ = nonrevisiting_search(P, G, a, b, max_states)
    if witness is not None and not is_nonrevisiting(P, G, witness):
        raise AssertionError("search produced a revisiting witness")
    return witness


def path_annotations(P: HPolytope, G: VertexGraph, path: list[int]) -> list[dict]:
    """Per-step facet arrivals and departures along a path."""
    out = []
    prev = None
    for i in path:
        inc = G.vertices[i].incident
        row = {"vertex": i, "incident": P.ordered(inc)}
        if prev is not None:
            row["arrivals"] = P.ordered(inc - prev)
            row["departures"] = P.ordered(prev - inc)
        out.append(row)
        prev = inc
    return out


def spindle_check(P: HPolytope, vertices) -> tuple[int, int]:
    """The unique pair of vertex indices whose incidences cover every facet."""
    masks = [P.mask(v.incident) for v in vertices]
    full = (1 << P.n) - 1
    pairs = [(i, j) for i, j in combinations(range(len(masks)), 2) if masks[i] | masks[j] == full]
    if not pairs:
        raise NotASpindleError("no pair of vertices covers all facets")
    if len(pairs) > 1:
        raise AmbiguousSpindleError(f"{len(pairs)} vertex pairs cover all facets")
    return pairs[0]


def all_but_simple_check(P: HPolytope, vertices, x: int, y: int) -> bool:
    return all(len(v.incident) == P.dim for i, v in enumerate(vertices) if i not in (x, y))


def hirsch_gap(n: int, d: int, delta: int) -> int:
    """delta - (n - d); positive means the Hirsch bound is violated."""
    return delta - (n - d)
