import random

import pytest

from wedgekit.enumeration import adjacency_graph, enumerate_vertices
from wedgekit.paths import (
    AmbiguousSpindleError,
    NotASpindleError,
    StateBudgetExceeded,
    all_but_simple_check,
    bfs_distances,
    distance,
    hirsch_gap,
    is_nonrevisiting,
    nonrevisiting_path_exists,
    nonrevisiting_search,
    path_annotations,
    shortest_path,
    spindle_check,
    step_is_revisit_free,
)

from fixtures import cube, simplex2
from oracles import all_simple_paths_nonrevisiting


@pytest.fixture(scope="module")
def p5_graph(p5, p5_vertices):
    return adjacency_graph(p5, p5_vertices)


def _xy_index(G, p5_xy):
    return G.index_of(p5_xy[0].coords), G.index_of(p5_xy[1].coords)


def test_p5_length(p5_graph, p5_xy):
    x, y = _xy_index(p5_graph, p5_xy)
    assert distance(p5_graph, x, y) == 6
    assert distance(p5_graph, x, x) == 0
    path = shortest_path(p5_graph, x, y)
    assert len(path) == 7 and path[0] == x and path[-1] == y


def test_p5_no_nonrevisiting_path(p5, p5_graph, p5_xy):
    x, y = _xy_index(p5_graph, p5_xy)
    witness, longest = nonrevisiting_search(p5, p5_graph, x, y)
    assert witness is None
    assert nonrevisiting_path_exists(p5, p5_graph, x, y) is None
    # the length bound concerns x-y paths only; walks elsewhere run longer
    assert len(longest) - 1 == 12 and longest[-1] != y
    assert is_nonrevisiting(p5, p5_graph, longest)


def test_p5_adjacent_is_trivial(p5, p5_graph, p5_xy):
    x, _ = _xy_index(p5_graph, p5_xy)
    for w in p5_graph.neighbors(x):
        path = nonrevisiting_path_exists(p5, p5_graph, x, w)
        assert path is not None and is_nonrevisiting(p5, p5_graph, path)
        assert len(path) == 2 or distance(p5_graph, x, w) == 1


def test_cube_witness_matches_oracle():
    P = cube(3)
    V = enumerate_vertices(P)
    G = adjacency_graph(P, V)
    a = 0
    b = next(i for i, v in enumerate(V) if not (v.incident & V[a].incident))
    path = nonrevisiting_path_exists(P, G, a, b)
    assert path is not None and len(path) - 1 == 3
    assert is_nonrevisiting(P, G, path)
    adj = {i: G.neighbors(i) for i in range(len(V))}
    inc = {i: v.incident for i, v in enumerate(V)}
    assert all_simple_paths_nonrevisiting(P, adj, inc, a, b, 3) is not None


def test_revisit_step_rule():
    assert step_is_revisit_free(0b011, 0b011, 0b110)
    assert not step_is_revisit_free(0b011, 0b010, 0b101)  # returns to facet 0


def test_state_budget(p5, p5_graph, p5_xy):
    x, y = _xy_index(p5_graph, p5_xy)
    with pytest.raises(StateBudgetExceeded):
        nonrevisiting_search(p5, p5_graph, x, y, max_states=5)


def test_annotations(p5, p5_graph, p5_xy):
    x, y = _xy_index(p5_graph, p5_xy)
    path = shortest_path(p5_graph, x, y)
    notes = path_annotations(p5, p5_graph, path)
    assert "arrivals" not in notes[0]
    for a, b in zip(notes, notes[1:]):
        assert set(b["incident"]) == (set(a["incident"]) - set(b["departures"])) | set(b["arrivals"])


def test_spindles(p5, p5_vertices, p5_xy):
    i, j = spindle_check(p5, p5_vertices)
    assert {p5_vertices[i].incident, p5_vertices[j].incident} == {p5_xy[0].incident, p5_xy[1].incident}
    assert all_but_simple_check(p5, p5_vertices, i, j)
    with pytest.raises(AmbiguousSpindleError):
        spindle_check(simplex2(), enumerate_vertices(simplex2()))
    C = cube(3)
    with pytest.raises(NotASpindleError):
        spindle_check(C, enumerate_vertices(C))
    assert all_but_simple_check(C, enumerate_vertices(C), 0, 1)


def test_wedge_not_all_but_simple(sw_trace, p5_xy):
    W = sw_trace.entries[1].polytope
    V = enumerate_vertices(W)
    G = adjacency_graph(W, V)
    i = G.index_of(p5_xy[0].coords + (0,))
    j = next(k for k, v in enumerate(V) if v.incident >= p5_xy[1].incident)
    with pytest.raises(AmbiguousSpindleError):  # x-image pairs with y_b and y_t
        spindle_check(W, V)
    assert not all_but_simple_check(W, V, i, j)
    nonsimple = [v for v in V if len(v.incident) > W.dim]
    assert len(nonsimple) == 3  # x-image plus y_b and y_t


def test_hirsch_gap():
    assert hirsch_gap(25, 5, 6) == -14
    assert hirsch_gap(3, 2, 1) == 0
    assert hirsch_gap(40, 20, 21) == 1


def test_distance_metric(p5_graph):
    rng = random.Random(7)
    n = len(p5_graph.vertices)
    tables = {}
    for _ in range(30):
        a, b, c = (rng.randrange(n) for _ in range(3))
        for s in (a, b):
            if s not in tables:
                tables[s] = bfs_distances(p5_graph, s)
        assert tables[a][b] == tables[b][a]
        assert tables[a][c] <= tables[a][b] + tables[b][c]
