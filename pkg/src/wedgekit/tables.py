"""Per-step nonsimplicity tables for construction traces.

Rows carry the polytope label, d, face label, k, m and excess, plus whether
the support passed the affine-support test and which mode produced it.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import Optional, Sequence

from .construction import ConstructionTrace
from .enumeration import DEFAULT_BUDGET, BudgetExceeded, enumerate_vertices
from .faces import FaceRecord, ascend_to_support, find_nonsimplicities, measure_face
from .hrep import HPolytope

HEADER = ("polytope", "d", "face", "k", "m", "excess", "affine_support", "mode")


@dataclass(frozen=True)
class TableRow:
    polytope: str
    d: int
    face: str
    k: int
    m: int
    excess: int
    affine_support: bool = True
    mode: str = ""

    def __post_init__(self):
        if self.excess != self.m - (self.d - self.k):
            raise ValueError(f"inconsistent row {self}")

    def key(self) -> tuple:
        return (self.polytope, self.face, self.k, self.m, self.excess)

    def cells(self) -> list:
        return [self.polytope, self.d, self.face, self.k, self.m, self.excess,
                "yes" if self.affine_support else "no", self.mode]


def rows_to_csv(rows: Sequence[TableRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in rows:
        w.writerow(r.cells())
    return buf.getvalue()


def rows_from_csv(text: str) -> list[TableRow]:
    rd = csv.reader(io.StringIO(text))
    head = next(rd, None)
    if tuple(head or ()) != HEADER:
        raise ValueError(f"unexpected table header {head}")
    out = []
    for cells in rd:
        if not cells:
            continue
        p, d, f, k, m, e, a, mode = cells
        out.append(TableRow(p, int(d), f, int(k), int(m), int(e), a == "yes", mode))
    return out


def compress_labels(P: HPolytope, labels) -> str:
    """'h21..h30 h33' style rendering of a label set in file order."""
    items = P.ordered(labels)
    parts, run = [], []

    def num(lab):
        head = lab.rstrip("0123456789")
        tail = lab[len(head):]
        return (head, int(tail)) if tail else (lab, None)

    def flush():
        if len(run) > 2:
            parts.append(f"{run[0]}..{run[-1]}")
        else:
            parts.extend(run)

    for lab in items:
        if run:
            (h0, n0), (h1, n1) = num(run[-1]), num(lab)
            if not (h0 == h1 and n0 is not None and n1 == n0 + 1):
                flush()
                run = []
        run.append(lab)
    if run:
        flush()
    return " ".join(parts)


def expand_labels(text: str) -> list[str]:
    """Inverse of compress_labels; also accepts commas as separators."""
    out = []
    for tok in text.replace(",", " ").split():
        if ".." in tok:
            a, b = tok.split("..", 1)
            ha, hb = a.rstrip("0123456789"), b.rstrip("0123456789")
            if ha != hb or ha == a or hb == b:
                raise ValueError(f"bad label range {tok!r}")
            lo, hi = int(a[len(ha):]), int(b[len(hb):])
            if lo > hi:
                raise ValueError(f"empty label range {tok!r}")
            out.extend(f"{ha}{i}" for i in range(lo, hi + 1))
        else:
            out.append(tok)
    return out


# -- expectations sidecar -------------------------------------------------------

@dataclass(frozen=True)
class ListedFace:
    name: str
    support: frozenset
    expected: Optional[tuple] = None  # (k, m, excess) listed for the face


def load_expectations(path) -> dict:
    """entry index -> (polytope name, [ListedFace])."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    out = {}
    for ent in doc["entries"]:
        faces = [
            ListedFace(f["name"], frozenset(expand_labels(f["support"])),
                       tuple(f["row"]) if "row" in f else None)
            for f in ent.get("faces", [])
        ]
        out[int(ent["entry"])] = (ent.get("polytope"), faces)
    return out


def expectations_for(script_path) -> Optional[Path]:
    p = Path(str(script_path) + ".expect.json")
    return p if p.exists() else None


# -- annotation -----------------------------------------------------------------

def _row(name: str, poly: str, rec: FaceRecord, mode: str) -> TableRow:
    return TableRow(poly, rec.poly_dim, name, rec.dim_k, rec.m, rec.excess, not rec.essential, mode)


def _pad(point, dim):
    from fractions import Fraction
    return tuple(point) + (Fraction(0),) * (dim + 1 - len(point))


def annotate_entry(trace: ConstructionTrace, i: int, expectations: dict | None = None,
                   budget: int = DEFAULT_BUDGET, images: dict | None = None) -> list[TableRow]:
    """Rows for one trace entry; fills entry.rows and entry.mode as a side effect."""
    ent = trace.entries[i]
    P = ent.polytope
    listed_name, listed = (expectations or {}).get(i, (None, []))
    poly = listed_name or ent.name
    rows: list[TableRow] = []
    recs: list[FaceRecord] = []
    vertices = None
    if comb(P.n, P.dim) <= budget:
        try:
            vertices = enumerate_vertices(P, budget=budget)
        except BudgetExceeded:
            vertices = None
    if vertices is not None:
        ent.mode = "enumeration"
        seen = set()
        for lf in listed:
            rec = measure_face(P, lf.support, vertices)
            rows.append(_row(lf.name, poly, rec, "enumeration"))
            recs.append(rec)
            seen.add(rec.support)
        for rec in find_nonsimplicities(P, vertices):
            if rec.support in seen:
                continue
            rows.append(_row(_auto_name(P, rec, images, trace), poly, rec, "enumeration"))
            recs.append(rec)
    else:
        ent.mode = "targeted"
        for lf in listed:
            rec = measure_face(P, lf.support)
            rows.append(_row(lf.name, poly, rec, "targeted"))
            recs.append(rec)
        if not listed and images and expectations is None:
            for name, pt in images.items():
                z = _pad(pt, P.dim)
                if not P.contains(z):
                    continue
                rec = ascend_to_support(P, P.tight(z))
                rows.append(_row(name + "-image", poly, rec, "targeted"))
                recs.append(rec)
    ent.rows = recs
    return rows


def _auto_name(P: HPolytope, rec: FaceRecord, images, trace) -> str:
    if images:
        for name, pt in images.items():
            z = _pad(pt, P.dim)
            if P.contains(z) and rec.support <= P.tight(z):
                return f"{name}-image face [{compress_labels(P, rec.support)}]"
    return f"[{compress_labels(P, rec.support)}]"


def annotate(trace: ConstructionTrace, expectations: dict | None = None, budget: int = DEFAULT_BUDGET,
             images: dict | None = None, entries: Sequence[int] | None = None, workers: int | None = None) -> list[TableRow]:
    """Rows for every entry, in trace order.

    Entries within the enumeration budget use full enumeration plus the
    walk; larger ones use the listed supports (targeted mode).  Without a
    sidecar, targeted entries climb from the zero lifts of ``images``.
    """
    idx = list(range(len(trace.entries))) if entries is None else list(entries)
    workers = workers if workers is not None else worker_count()
    if workers > 1 and len(idx) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futs = [ex.submit(annotate_entry, trace, i, expectations, budget, images) for i in idx]
            parts = [f.result() for f in futs]
    else:
        parts = [annotate_entry(trace, i, expectations, budget, images) for i in idx]
    return [r for part in parts for r in part]


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("WEDGEKIT_WORKERS", "1")))
    except ValueError:
        return 1
