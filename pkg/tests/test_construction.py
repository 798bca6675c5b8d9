from fractions import Fraction as F

import pytest

from wedgekit.construction import (
    ConstructionError,
    ConstructionStep,
    ScriptError,
    build_pinched,
    build_singly_perturbed,
    detect_bad_feet,
    epsilon_rank_report,
    format_script,
    load_script,
    natural_images,
    parse_script,
    perturb,
    pinched_steps,
    remnant_facet,
    replay,
    santos_weibel_steps,
    singly_perturbed_steps,
    wedge,
)
from wedgekit.enumeration import adjacency_graph, enumerate_vertices
from wedgekit.faces import measure_face

from wedgekit.exact import rank

from fixtures import cube, simplex2


def is_vertex(P, pt):
    return P.contains(pt) and rank([P.normal(g) for g in P.tight(pt)]) == P.dim


def H(*idx):
    return frozenset(f"h{i}" for i in idx)


def test_wedge_rows():
    P = simplex2()
    W = wedge(P, "a", F(3), "t")
    assert W.dim == 3 and W.labels == P.labels + ("t",)
    assert W.normal("a") == P.normal("a") + (3,)
    assert W.normal("t") == P.normal("a") + (-3,)
    assert W.normal("b") == P.normal("b") + (0,)


def test_wedge_errors():
    P = simplex2()
    with pytest.raises(ConstructionError):
        wedge(P, "zz", 1, "t")
    with pytest.raises(ConstructionError):
        wedge(P, "a", 0, "t")
    with pytest.raises(ConstructionError):
        wedge(P, "a", 1, "b")


def test_perturb():
    P = wedge(cube(2), cube(2).labels[0], 1, "t")
    Q = perturb(P, [(P.labels[1], F(1, 2))])
    assert Q.normal(P.labels[1])[-1] == F(1, 2)
    assert perturb(P, []) is P
    assert perturb(P, [(P.labels[1], 0)]).normals == P.normals
    with pytest.raises(ConstructionError):
        perturb(P, [("nope", 1)])
    with pytest.raises(ConstructionError):
        perturb(P, [(P.labels[1], 1), (P.labels[1], 2)])


def test_natural_images(p5, p5_xy, sw_trace):
    W = sw_trace.entries[1].polytope
    x, y = p5_xy
    assert natural_images(p5, W, x, "h12") == [x.coords + (0,)]
    lo, hi = natural_images(p5, W, y, "h12")
    assert lo[-1] == -hi[-1] and hi[-1] > 0
    for pt in (lo, hi):
        assert W.contains(pt)


def test_first_perturbed_wedge(p5_xy, sw_trace):
    x, y = p5_xy
    W = sw_trace.entries[1].polytope
    pW = sw_trace.entries[2].polytope
    y0 = y.coords + (0,)
    yb = natural_images(sw_trace.entries[0].polytope, W, y, "h12")[0]
    assert W.tight(y0) == H(*range(21, 34))  # y0 on an edge of the wedge
    assert pW.tight(y0) == H(*range(21, 34)) and is_vertex(pW, y0)
    assert not pW.contains(yb)


def test_sw_trace_shape(sw_trace):
    assert len(sw_trace.entries) == 31
    assert sw_trace.stages == 15
    assert sw_trace.final.dim == 20 and sw_trace.final.n == 40
    assert [e.polytope.dim for e in sw_trace.entries[::2]] == list(range(5, 21))
    assert sw_trace.entries[1].name == "Wdg P5"
    assert sw_trace.entries[6].name == "pw^3 P5"
    assert sw_trace.wedge_columns == ["X"] * 8 + ["Y"] * 7


def test_replay_empty_script(p5):
    tr = replay(p5, [])
    assert len(tr.entries) == 1 and tr.stages == 0 and tr.final is p5


def test_epsilon_ranks(p5, sw_trace):
    for tr in (sw_trace, build_singly_perturbed(p5), build_pinched(p5)):
        rep = epsilon_rank_report(tr)
        assert (rep.required_x, rep.required_y) == (7, 8)
        assert rep.ok, (rep.rank_x, rep.rank_y)


def test_remnant(p5):
    assert remnant_facet(p5) == "h29"


def test_script_roundtrip():
    for steps in (santos_weibel_steps(), singly_perturbed_steps(), pinched_steps()):
        assert parse_script(format_script(steps, eps=1)) == steps
        assert parse_script(format_script(steps)) == steps


@pytest.mark.parametrize("name,builder", [
    ("santos_weibel", santos_weibel_steps),
    ("singly_perturbed", singly_perturbed_steps),
    ("pinched", pinched_steps),
])
def test_bundled_scripts(name, builder):
    assert load_script(name) == builder()
    assert load_script(name, eps=F(1, 3)) == builder(eps=F(1, 3))


def test_h5_script():
    assert load_script("santos_weibel_h5") == santos_weibel_steps(last_pair=("h4", "h5"))


def test_script_values():
    st = parse_script("wedge foot=a top=t C=5  # comment\nperturb a=-eps b=3/2*eps c=7/3\n", eps=F(2))
    assert st[0] == ConstructionStep.wedge("a", "t", 5)
    assert st[1].deltas == (("a", F(-2)), ("b", F(3)), ("c", F(7, 3)))


@pytest.mark.parametrize("text,line", [
    ("wedge foot=a\n", 1),
    ("\n\nfrobnicate x=1\n", 3),
    ("wedge foot=a top=t\nperturb a=1 a=2\n", 2),
    ("perturb a=0.5\n", 1),
    ("wedge foot=a top=t C=-1\n", 1),
    ("perturb\n", 1),
    ("perturb a\n", 1),
])
def test_script_errors(text, line):
    with pytest.raises(ScriptError) as exc:
        parse_script(text)
    assert exc.value.lineno == line
    assert str(exc.value).startswith(f"line {line}:")


def test_pinched_first_step(p5, p5_xy):
    tr = build_pinched(p5)
    y0 = p5_xy[1].coords + (0,)
    P = tr.entries[2].polytope
    assert is_vertex(P, y0)
    assert measure_face(P, P.tight(y0)).row() == (0, 13, 7)


def test_bad_foot_detection(p5_xy, sw_trace):
    pw = sw_trace.entries[2].polytope
    V = enumerate_vertices(pw)
    G = adjacency_graph(pw, V)
    y0 = p5_xy[1].coords + (0,)
    s = next(i for i, v in enumerate(V) if v.coords == y0)
    bad = detect_bad_feet(pw, G, s, "h31")
    assert [F for F, _ in bad] == ["h13"]
    (a, b), = [e for _, e in bad]
    assert a == s and "h13" in V[b].incident
    with pytest.raises(ConstructionError):
        detect_bad_feet(pw, G, s, "h1")
