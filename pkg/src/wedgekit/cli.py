"""wedgekit command line.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from math import comb
from pathlib import Path

from .construction import ConstructionError, epsilon_rank_report, load_script, replay, DEFAULT_C, DEFAULT_EPS
from .enumeration import DEFAULT_BUDGET, BudgetExceeded, adjacency_graph, enumerate_vertices
from .exact import format_rational, parse_rational, RationalFormatError
from .faces import BranchBudgetExceeded, FaceError, find_nonsimplicities
from .hrep import DATA_DIR, SCRIPTS_DIR, HPolytope, PolytopeError, load_polytope, save_polytope
from .paths import (
    NotASpindleError,
    StateBudgetExceeded,
    all_but_simple_check,
    distance,
    hirsch_gap,
    nonrevisiting_path_exists,
    path_annotations,
    spindle_check,
)
from .tables import annotate, compress_labels, expand_labels, expectations_for, load_expectations, rows_from_csv, rows_to_csv

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def _resolve(path: str, bundled: Path, suffix: str = "") -> Path:
    p = Path(path)
    if p.exists():
        return p
    for cand in (bundled / path, bundled / (path + suffix)):
        if cand.exists():
            return cand
    raise InputError(f"no such file: {path}")


def _load(path: str) -> HPolytope:
    if path.lower() in ("p5", "p5_spindle"):
        path = str(DATA_DIR / "p5_spindle.json")
    return load_polytope(_resolve(path, DATA_DIR, ".json"))


def _rat(text: str):
    try:
        return parse_rational(text)
    except RationalFormatError as exc:
        raise InputError(str(exc)) from None


def _fmt_point(p) -> str:
    return "(" + ", ".join(format_rational(c) for c in p) + ")"


def _vertex_on(P: HPolytope, vertices, spec: str) -> int:
    labels = set(expand_labels(spec))
    missing = [lab for lab in labels if lab not in P]
    if missing:
        raise InputError(f"unknown facet labels {sorted(missing)}")
    hits = [i for i, v in enumerate(vertices) if labels <= v.incident]
    if len(hits) != 1:
        raise InputError(f"facets {spec!r} meet in {len(hits)} vertices, expected exactly one")
    return hits[0]


def spindle_images(P: HPolytope, budget: int = DEFAULT_BUDGET):
    """(images, sides) from the spindle pair, or (None, {}) if P is not an enumerable spindle."""
    if comb(P.n, P.dim) > budget:
        return None, {}
    V = enumerate_vertices(P, budget=budget)
    try:
        i, j = spindle_check(P, V)
    except NotASpindleError:
        return None, {}
    x, y = V[i], V[j]
    sides = {lab: ("X" if lab in x.incident else "Y") for lab in P.labels}
    return {"x": x.coords, "y": y.coords}, sides


# -- commands -------------------------------------------------------------------

def cmd_verify(args) -> int:
    P = _load(args.file)
    V = enumerate_vertices(P, budget=args.budget)
    G = adjacency_graph(P, V)
    print(f"polytope: dim {P.dim}, {P.n} facets, {len(V)} vertices, {len(G.edges)} edges")
    ok = True
    try:
        i, j = spindle_check(P, V)
    except NotASpindleError as exc:
        print(f"FAIL spindle: {exc}")
        nonsimple = [v for v in V if len(v.incident) > P.dim]
        for v in nonsimple[:8]:
            print(f"  nonsimple vertex on [{compress_labels(P, v.incident)}]")
        return EXIT_FAIL
    x, y = V[i], V[j]
    print(f"PASS spindle: x on [{compress_labels(P, x.incident)}], y on [{compress_labels(P, y.incident)}]")
    if all_but_simple_check(P, V, i, j):
        print("PASS all-but-simple")
    else:
        ok = False
        bad = sum(1 for k, v in enumerate(V) if k not in (i, j) and len(v.incident) != P.dim)
        print(f"FAIL all-but-simple: {bad} further nonsimple vertices")
    delta = distance(G, i, j)
    print(f"INFO distance(x, y) = {delta}; Hirsch gap {hirsch_gap(P.n, P.dim, delta)}")
    witness = nonrevisiting_path_exists(P, G, i, j, max_states=args.max_states)
    if witness is None:
        print("PASS no nonrevisiting x-y path")
    else:
        ok = False
        print(f"FAIL nonrevisiting x-y path of length {len(witness) - 1} exists")
    recs = find_nonsimplicities(P, V)
    summary = ", ".join(f"([{compress_labels(P, r.support)}], {r.dim_k}, {r.m}, {r.excess})" for r in recs)
    at_pair = all(r.dim_k == 0 and r.support in (x.incident, y.incident) for r in recs)
    print(f"{'PASS' if at_pair else 'FAIL'} nonsimplicities: {summary or 'none'}")
    ok = ok and at_pair
    print("RESULT", "PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_build(args) -> int:
    P = _load(args.file)
    script = _resolve(args.script, SCRIPTS_DIR)
    C = _rat(args.C) if args.C else DEFAULT_C
    eps = _rat(args.eps) if args.eps else DEFAULT_EPS
    steps = load_script(script, eps=eps, C=C)
    images, sides = spindle_images(P, args.budget)
    trace = replay(P, steps, C, sides)
    exp_path = Path(args.expect) if args.expect else expectations_for(script)
    expectations = load_expectations(exp_path) if exp_path else None
    out = Path(args.out) if args.out else None
    if out:
        (out / "polytopes").mkdir(parents=True, exist_ok=True)
    lines = []
    for k, ent in enumerate(trace.entries):
        P_k = ent.polytope
        work = comb(P_k.n, P_k.dim)
        mode = "enumeration" if work <= args.budget else "targeted"
        step = ent.step.describe() if ent.step else "input"
        lines.append(f"{k:02d} {ent.name} | dim {P_k.dim} facets {P_k.n} | {mode} | {step}")
        if mode == "targeted" and not args.no_table:
            lines[-1] += f" | budget {args.budget} < {work} subsets, targeted fallback"
        if out:
            save_polytope(P_k, out / "polytopes" / f"step_{k:02d}.json")
    print("\n".join(lines))
    print(f"stages {trace.stages}, final dim {trace.final.dim}, {trace.final.n} facets")
    status = EXIT_OK
    if not args.no_table:
        rows = annotate(trace, expectations, args.budget, images)
        text = rows_to_csv(rows)
        if out:
            (out / "table.csv").write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        if expectations:
            bad = _check_expectations(rows, expectations)
            for msg in bad:
                print("MISMATCH", msg)
            if bad:
                status = EXIT_FAIL
    if sides:
        rep = epsilon_rank_report(trace)
        msg = f"epsilon ranks: X {rep.rank_x} (need {rep.required_x}), Y {rep.rank_y} (need {rep.required_y})"
        print(msg)
        if out:
            (out / "epsilon_ranks.txt").write_text(msg + "\n", encoding="utf-8")
    if out:
        (out / "steps.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return status


def _check_expectations(rows, expectations) -> list[str]:
    got = {(r.polytope, r.face): r for r in rows}
    bad = []
    for _, (poly, faces) in sorted(expectations.items()):
        for lf in faces:
            r = got.get((poly, lf.name))
            if r is None:
                bad.append(f"{poly} {lf.name}: no row")
            elif lf.expected and (r.k, r.m, r.excess) != lf.expected:
                bad.append(f"{poly} {lf.name}: got {(r.k, r.m, r.excess)}, listed {lf.expected}")
    return bad


def cmd_tables(args) -> int:
    path = Path(args.dir)
    table = path / "table.csv" if path.is_dir() else path
    if not table.exists():
        raise InputError(f"no table found under {args.dir}")
    rows = rows_from_csv(table.read_text(encoding="utf-8"))
    if args.polytope:
        rows = [r for r in rows if r.polytope in set(args.polytope)]
    if args.min_dim is not None:
        rows = [r for r in rows if r.d >= args.min_dim]
    if args.max_dim is not None:
        rows = [r for r in rows if r.d <= args.max_dim]
    sys.stdout.write(rows_to_csv(rows))
    return EXIT_OK


def cmd_vertices(args) -> int:
    P = _load(args.file)
    V = enumerate_vertices(P, budget=args.budget)
    print(f"# {len(V)} vertices")
    for i, v in enumerate(V):
        print(f"v{i} {_fmt_point(v.coords)} [{compress_labels(P, v.incident)}]")
    return EXIT_OK


def cmd_graph(args) -> int:
    P = _load(args.file)
    V = enumerate_vertices(P, budget=args.budget)
    G = adjacency_graph(P, V)
    print(f"# {len(V)} vertices, {len(G.edges)} edges")
    for a, b in G.edges:
        print(f"v{a} v{b}")
    return EXIT_OK


def cmd_distance(args) -> int:
    P = _load(args.file)
    V = enumerate_vertices(P, budget=args.budget)
    G = adjacency_graph(P, V)
    a, b = _vertex_on(P, V, args.a), _vertex_on(P, V, args.b)
    print(distance(G, a, b))
    return EXIT_OK


def cmd_nonrevisit(args) -> int:
    P = _load(args.file)
    V = enumerate_vertices(P, budget=args.budget)
    G = adjacency_graph(P, V)
    if args.a and args.b:
        a, b = _vertex_on(P, V, args.a), _vertex_on(P, V, args.b)
    else:
        a, b = spindle_check(P, V)
    path = nonrevisiting_path_exists(P, G, a, b, max_states=args.max_states)
    if path is None:
        print("none")
        return EXIT_OK
    print(f"# nonrevisiting path of length {len(path) - 1}")
    for i, note in zip(path, path_annotations(P, G, path)):
        arr = compress_labels(P, note.get("arrivals", ())) or "-"
        dep = compress_labels(P, note.get("departures", ())) or "-"
        print(f"v{i} {_fmt_point(V[i].coords)} arrive [{arr}] depart [{dep}]")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wedgekit", description="Exact wedge and perturbation constructions on H-polytopes.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, states=False):
        p.add_argument("file", help="polytope JSON file, or 'p5' for the bundled spindle")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max d-subsets scanned by enumeration")
        if states:
            p.add_argument("--max-states", type=int, default=10**7)

    p = sub.add_parser("verify", help="spindle / path / nonsimplicity battery")
    common(p, states=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("build", help="replay a construction script")
    common(p)
    p.add_argument("--script", required=True)
    p.add_argument("--C", default=None, help="wedge constant (exact rational)")
    p.add_argument("--eps", default=None, help="value of eps in scripts (exact rational)")
    p.add_argument("--expect", default=None, help="expectations sidecar (default: <script>.expect.json)")
    p.add_argument("--out", default=None, help="directory for polytopes, table and reports")
    p.add_argument("--no-table", action="store_true")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("tables", help="print the table of a build directory")
    p.add_argument("dir")
    p.add_argument("--polytope", action="append")
    p.add_argument("--min-dim", type=int)
    p.add_argument("--max-dim", type=int)
    p.set_defaults(func=cmd_tables)

    for name, fn in (("vertices", cmd_vertices), ("graph", cmd_graph)):
        p = sub.add_parser(name)
        common(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("distance", help="graph distance between two vertices given by facet sets")
    common(p)
    p.add_argument("a", help="facets through the first vertex, e.g. h1..h12")
    p.add_argument("b")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("nonrevisit", help="search for a nonrevisiting path")
    common(p, states=True)
    p.add_argument("a", nargs="?")
    p.add_argument("b", nargs="?")
    p.set_defaults(func=cmd_nonrevisit)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BudgetExceeded, StateBudgetExceeded, BranchBudgetExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, PolytopeError, ConstructionError, FaceError, NotASpindleError, KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
