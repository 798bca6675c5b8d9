"""Small hand-built polytopes used across the tests."""

from fractions import Fraction as F

from wedgekit.hrep import HPolytope


def simplex2():
    # x >= 0, y >= 0, 1 - x - y >= 0
    return HPolytope.from_rows(2, [("a", (0, 1, 0)), ("b", (0, 0, 1)), ("c", (1, -1, -1))])


def cube(d=3):
    rows = []
    for i in range(d):
        lo = [0] * (d + 1)
        lo[i + 1] = 1
        hi = [1] + [0] * d
        hi[i + 1] = -1
        rows.append((f"l{i}", tuple(lo)))
        rows.append((f"u{i}", tuple(hi)))
    return HPolytope.from_rows(d, rows)


HEX_EDGES = [(2, 1, 4), (0, 1, 2), (-2, 1, 4), (-2, -1, 4), (0, -1, 2), (2, -1, 4)]  # a.x + b.y <= c


def hex_pyramid():
    """Pyramid over the hexagon (+-2,0), (+-1,+-2) with apex (0,0,1)."""
    rows = [("base", (0, 0, 0, 1))]
    for i, (a, b, c) in enumerate(HEX_EDGES):
        rows.append((f"s{i}", (c, -a, -b, -c)))
    return HPolytope.from_rows(3, rows)


def hex_pyramid_prism():
    """Prism over the hexagonal pyramid: the apex lifts to a nonsimple edge."""
    P = hex_pyramid()
    rows = [(lab, h + (F(0),)) for lab, h in zip(P.labels, P.normals)]
    rows.append(("bottom", (0, 0, 0, 0, 1)))
    rows.append(("top", (1, 0, 0, 0, -1)))
    return HPolytope.from_rows(4, rows)


def square_pyramid():
    rows = [("base", (0, 0, 0, 1)),
            ("e0", (1, -1, 0, -1)), ("e1", (1, 1, 0, -1)),
            ("e2", (1, 0, -1, -1)), ("e3", (1, 0, 1, -1))]
    return HPolytope.from_rows(3, rows)


def octahedron():
    rows = []
    k = 0
    for sx in (1, -1):
        for sy in (1, -1):
            for sz in (1, -1):
                rows.append((f"o{k}", (1, -sx, -sy, -sz)))
                k += 1
    return HPolytope.from_rows(3, rows)


def all_fixtures():
    return {
        "simplex2": simplex2(),
        "square": cube(2),
        "cube": cube(3),
        "cube4": cube(4),
        "hex_pyramid": hex_pyramid(),
        "hex_prism": hex_pyramid_prism(),
        "square_pyramid": square_pyramid(),
        "octahedron": octahedron(),
    }


def random_polytope(rng, d, extra):
    """Box [-1, 1]^d cut by ``extra`` random halfspaces that keep the origin strictly inside."""
    rows = []
    for i in range(d):
        e = [0] * d
        e[i] = 1
        rows.append((f"p{i}", (1, *[-v for v in e])))
        rows.append((f"m{i}", (1, *e)))
    for j in range(extra):
        a = [rng.randint(-4, 4) for _ in range(d)]
        if not any(a):
            a[0] = 1
        c = F(rng.randint(1, 6), 2)
        rows.append((f"r{j}", (c, *a)))
    P = HPolytope.from_rows(d, rows, validate=False)
    # drop redundant cuts so the result is an irredundant H-representation
    red = set(P.redundant_facets())
    keep = [(lab, h) for lab, h in zip(P.labels, P.normals) if lab not in red]
    return HPolytope.from_rows(d, keep)
