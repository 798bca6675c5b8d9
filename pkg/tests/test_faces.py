from fractions import Fraction as F

import pytest

from wedgekit.enumeration import enumerate_vertices
from wedgekit.faces import (
    AffineSupportError,
    EmptyFaceError,
    NotMaximalError,
    affine_support_check,
    ascend_to_support,
    boundary_facets,
    face_dimension,
    find_nonsimplicities,
    maximality_closure,
    measure_face,
    relative_interior_point,
    verify_nonsimplicity,
)

from fixtures import all_fixtures, cube, hex_pyramid, hex_pyramid_prism, simplex2
from oracles import nonsimplicities_bruteforce, vertices_bruteforce


def H(*idx):
    return frozenset(f"h{i}" for i in idx)


X5 = H(*range(1, 13))
Y5 = H(*range(21, 34))


@pytest.mark.parametrize("name", sorted(all_fixtures()))
def test_walk_matches_subset_oracle(name):
    P = all_fixtures()[name]
    V = enumerate_vertices(P)
    got = {r.support: r.row() for r in find_nonsimplicities(P, V)}
    assert got == nonsimplicities_bruteforce(P, vertices_bruteforce(P))


def test_simple_polytopes_have_none():
    for P in (cube(3), cube(4), simplex2()):
        assert find_nonsimplicities(P, enumerate_vertices(P)) == []


def test_pyramid_apex_and_prism_edge():
    P = hex_pyramid()
    recs = find_nonsimplicities(P, enumerate_vertices(P))
    assert [r.row() for r in recs] == [(0, 6, 3)]
    Q = hex_pyramid_prism()
    recs = find_nonsimplicities(Q, enumerate_vertices(Q))
    assert [r.row() for r in recs] == [(1, 6, 3)]
    assert recs[0].support == frozenset(f"s{i}" for i in range(6))


def test_prism_top_not_affinely_supporting():
    Q = hex_pyramid_prism()
    vt = next(v for v in enumerate_vertices(Q) if "top" in v.incident and "s0" in v.incident and "s3" in v.incident)
    holds, essential = affine_support_check(Q, vt.incident)
    assert not holds and essential == {"top"}
    with pytest.raises(AffineSupportError) as exc:
        verify_nonsimplicity(Q, vt.incident)
    assert exc.value.essential == {"top"}


def test_p5_records(p5, p5_vertices):
    recs = find_nonsimplicities(p5, p5_vertices)
    assert [(r.support, r.row()) for r in recs] == [(X5, (0, 12, 7)), (Y5, (0, 13, 8))]


def test_verify_targeted_p5(p5, p5_xy):
    rec = verify_nonsimplicity(p5, Y5)
    assert rec.row() == (0, 13, 8)
    assert rec.witness == p5_xy[1].coords
    assert all(s > 0 for lab, s in zip(p5.labels, p5.slacks(rec.witness)) if lab not in Y5)


def test_relative_interior_point(p5, p5_xy):
    assert relative_interior_point(p5, X5) == p5_xy[0].coords
    P = simplex2()
    pt = relative_interior_point(P, {"a"})
    assert P.tight(pt) == {"a"}


def test_relative_interior_point_empty():
    P = simplex2()
    with pytest.raises(EmptyFaceError):
        relative_interior_point(P, {"a", "b", "c"})
    with pytest.raises(EmptyFaceError):
        measure_face(P, {"a", "b", "c"})


def test_closure(p5, p5_vertices):
    assert maximality_closure(p5, H(*range(1, 12))) == X5
    assert maximality_closure(p5, H(*range(1, 12)), p5_vertices) == X5
    assert maximality_closure(simplex2(), {"a"}) == {"a"}
    with pytest.raises(NotMaximalError) as exc:
        measure_face(p5, H(*range(1, 12)))
    assert exc.value.closure == X5


def test_face_dimensions(sw_trace):
    W, W2 = sw_trace.entries[1].polytope, sw_trace.entries[4].polytope
    assert face_dimension(W, Y5) == 1
    assert face_dimension(W2, H(*range(21, 31), 33)) == 2


def test_wedge_edge_interior_point(p5_xy, sw_trace):
    W = sw_trace.entries[1].polytope
    pt = relative_interior_point(W, Y5)
    y = p5_xy[1].coords
    assert pt[:6] == y
    bound = W.normal("h12")[:6]
    lim = sum(a * b for a, b in zip(bound, y)) / W.normal("h12")[-1]
    assert -lim < pt[-1] < lim
    assert W.tight(pt) == Y5
    assert boundary_facets(W, Y5) == {"h12", "h13"}


def test_boundary_facets_rectangle(sw_trace):
    W2 = sw_trace.entries[4].polytope
    rec = measure_face(W2, H(*range(21, 31), 33))
    assert rec.boundary == {"h13", "h14", "h31", "h32"}


def test_ascend_from_vertex(sw_trace, p5_xy):
    W = sw_trace.entries[2].polytope  # first perturbed wedge
    y0 = p5_xy[1].coords + (F(0),)
    rec = ascend_to_support(W, W.tight(y0))
    assert rec.row() == (1, 12, 7) and rec.support == H(*range(21, 32), 33)
