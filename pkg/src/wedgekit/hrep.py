"""H-represented polytopes over the flat ``{1} x R^d``.

A polytope is the set ``{v : v[0] = 1, normal . v >= 0 for every facet}``.
Coordinate 0 of every normal is the affine constant.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import lp
from .exact import QMatrix, RationalFormatError, as_rational, dot, format_rational, parse_rational, rank


class PolytopeError(ValueError):
    """Base class for polytope ingestion and validation failures."""


class PolytopeFormatError(PolytopeError):
    pass


class MalformedRationalError(PolytopeFormatError):
    pass


class DuplicateLabelError(PolytopeError):
    pass


class DimensionMismatchError(PolytopeError):
    pass


class InfeasibleError(PolytopeError):
    pass


class UnboundedError(PolytopeError):
    pass


class RedundantFacetWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class HPolytope:
    dim: int
    labels: tuple
    normals: tuple

    def __post_init__(self):
        if len(self.labels) != len(self.normals):
            raise DimensionMismatchError("one label per normal required")
        seen = set()
        for lab in self.labels:
            if lab in seen:
                raise DuplicateLabelError(f"duplicate facet label {lab!r}")
            seen.add(lab)
        for lab, nrm in zip(self.labels, self.normals):
            if len(nrm) != self.dim + 1:
                raise DimensionMismatchError(
                    f"facet {lab!r} has {len(nrm)} entries, expected dim+1 = {self.dim + 1}"
                )

    @classmethod
    def from_rows(cls, dim: int, rows: Iterable[tuple[str, Sequence]], validate: bool = True) -> "HPolytope":
        labels, normals = [], []
        for lab, nrm in rows:
            labels.append(str(lab))
            normals.append(tuple(as_rational(x) for x in nrm))
        P = cls(dim, tuple(labels), tuple(normals))
        if validate:
            P.validate()
        return P

    # structural identity: labels, dim, exact entries
    def __eq__(self, other):
        return (
            isinstance(other, HPolytope)
            and self.dim == other.dim
            and self.labels == other.labels
            and self.normals == other.normals
        )

    def __hash__(self):
        return hash((self.dim, self.labels, self.normals))

    def __repr__(self):
        return f"HPolytope(dim={self.dim}, facets={len(self.labels)})"

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def _index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown facet label {label!r}") from None

    def __contains__(self, label) -> bool:
        return label in self._index

    def normal(self, label: str) -> tuple:
        return self.normals[self.index(label)]

    @property
    def matrix(self) -> QMatrix:
        return QMatrix(self.normals, self.dim + 1)

    def slacks(self, point: Sequence[Fraction]) -> tuple:
        return tuple(dot(h, point) for h in self.normals)

    def contains(self, point: Sequence[Fraction]) -> bool:
        return point[0] == 1 and all(s >= 0 for s in self.slacks(point))

    def tight(self, point: Sequence[Fraction]) -> frozenset:
        return frozenset(lab for lab, s in zip(self.labels, self.slacks(point)) if s == 0)

    def mask(self, labels: Iterable[str]) -> int:
        m = 0
        for lab in labels:
            m |= 1 << self.index(lab)
        return m

    def labels_of(self, mask: int) -> frozenset:
        return frozenset(lab for i, lab in enumerate(self.labels) if mask >> i & 1)

    def ordered(self, labels: Iterable[str]) -> list:
        """Labels sorted by facet order."""
        return sorted(labels, key=self.index)

    # -- validation ---------------------------------------------------------

    def is_feasible(self) -> bool:
        d = self.dim
        A = [h[1:] for h in self.normals]
        b = [-h[0] for h in self.normals]
        res = lp.maximize([0] * d, A, [">="] * self.n, b, free=range(d))
        return res.status == lp.OPTIMAL

    def is_bounded(self) -> bool:
        # recession cone {u : A u >= 0} is {0} iff rank A = d and some y > 0 has A^T y = 0
        d = self.dim
        A = [h[1:] for h in self.normals]
        if rank(A) < d:
            return False
        At = [[A[i][j] for i in range(self.n)] for j in range(d)]
        rhs = [-sum(row) for row in At]  # y = 1 + z, z >= 0
        res = lp.maximize([0] * self.n, At, ["="] * d, rhs)
        return res.status == lp.OPTIMAL

    def redundant_facets(self) -> list:
        """Facets that are tight nowhere on the polytope."""
        d = self.dim
        A = [h[1:] for h in self.normals]
        b = [-h[0] for h in self.normals]
        out = []
        for i, h in enumerate(self.normals):
            res = lp.maximize([-a for a in h[1:]], A, [">="] * self.n, b, free=range(d))
            if res.status == lp.OPTIMAL and h[0] - res.value > 0:
                out.append(self.labels[i])
        return out

    def validate(self, check_redundant: bool = False) -> None:
        if not self.is_feasible():
            raise InfeasibleError("facet system has no point with v0 = 1")
        if not self.is_bounded():
            raise UnboundedError("facet system has a nonzero recession direction")
        if check_redundant:
            red = self.redundant_facets()
            if red:
                warnings.warn(f"redundant facet rows (never tight): {red}", RedundantFacetWarning, stacklevel=2)


@dataclass(frozen=True)
class VertexRecord:
    coords: tuple
    incident: frozenset

    def __repr__(self):
        pt = ", ".join(format_rational(q) for q in self.coords)
        return f"VertexRecord(({pt}), |incident|={len(self.incident)})"


# -- file format ------------------------------------------------------------

def _parse_entry(x, label):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise MalformedRationalError(f"facet {label!r}: entries must be rational strings, got {x!r}")
    try:
        return parse_rational(str(x))
    except RationalFormatError as exc:
        raise MalformedRationalError(f"facet {label!r}: {exc}") from None


def polytope_from_dict(doc: Mapping, validate: bool = True, check_redundant: bool = True) -> HPolytope:
    if not isinstance(doc, Mapping) or "dim" not in doc or "facets" not in doc:
        raise PolytopeFormatError("document needs top-level 'dim' and 'facets'")
    dim = doc["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 0:
        raise PolytopeFormatError(f"'dim' must be a nonnegative integer, got {dim!r}")
    rows = []
    for k, fc in enumerate(doc["facets"]):
        if not isinstance(fc, Mapping) or "label" not in fc or "normal" not in fc:
            raise PolytopeFormatError(f"facet #{k} needs 'label' and 'normal'")
        lab = fc["label"]
        if not isinstance(lab, str):
            raise PolytopeFormatError(f"facet #{k}: label must be a string")
        rows.append((lab, tuple(_parse_entry(x, lab) for x in fc["normal"])))
    labels = [r[0] for r in rows]
    P = HPolytope(dim, tuple(labels), tuple(r[1] for r in rows))
    if validate:
        P.validate(check_redundant=check_redundant)
    return P


def parse_polytope(document: str, validate: bool = True, check_redundant: bool = True) -> HPolytope:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise PolytopeFormatError(f"not a JSON document: {exc}") from None
    return polytope_from_dict(doc, validate=validate, check_redundant=check_redundant)


def polytope_to_dict(P: HPolytope) -> dict:
    return {
        "dim": P.dim,
        "facets": [
            {"label": lab, "normal": [format_rational(q) for q in nrm]}
            for lab, nrm in zip(P.labels, P.normals)
        ],
    }


def serialize_polytope(P: HPolytope) -> str:
    lines = ["{", f'  "dim": {P.dim},', '  "facets": [']
    rows = [
        "    " + json.dumps({"label": lab, "normal": [format_rational(q) for q in nrm]})
        for lab, nrm in zip(P.labels, P.normals)
    ]
    lines.append(",\n".join(rows))
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_polytope(path, validate: bool = True, check_redundant: bool = True) -> HPolytope:
    return parse_polytope(Path(path).read_text(encoding="utf-8"), validate, check_redundant)


def save_polytope(P: HPolytope, path) -> None:
    Path(path).write_text(serialize_polytope(P), encoding="utf-8")


DATA_DIR = Path(__file__).parent / "data"
SCRIPTS_DIR = Path(__file__).parent / "scripts"


def load_p5(validate: bool = True) -> HPolytope:
    """The bundled 25-facet all-but-simple spindle in dimension 5."""
    return load_polytope(DATA_DIR / "p5_spindle.json", validate=validate, check_redundant=False)
