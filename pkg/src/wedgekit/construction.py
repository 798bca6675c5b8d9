"""Wedge, perturbation and perturbed-wedge constructions.

A wedge over the foot ``F`` adds one coordinate ``t``: every other facet
``g`` becomes ``[g | 0]``, the foot becomes the base ``[F | C]`` (keeping its
label) and a new top ``[F | -C]`` is appended.  A perturbation adds ``eps``
to the last coordinate of chosen facets; positive values truncate the base
side, negative values the top side.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .exact import as_rational, dot, format_rational, parse_rational, rank, RationalFormatError
from .hrep import SCRIPTS_DIR, HPolytope, VertexRecord

DEFAULT_C = Fraction(10**7)
DEFAULT_EPS = Fraction(1)


class ConstructionError(ValueError):
    pass


class ScriptError(ConstructionError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


@dataclass(frozen=True)
class ConstructionStep:
    kind: str  # "wedge" | "perturb"
    foot: Optional[str] = None
    top: Optional[str] = None
    C: Optional[Fraction] = None
    deltas: tuple = ()

    @classmethod
    def wedge(cls, foot: str, top: str, C=None) -> "ConstructionStep":
        return cls("wedge", foot=foot, top=top, C=None if C is None else as_rational(C))

    @classmethod
    def perturb(cls, deltas: Iterable[tuple[str, object]]) -> "ConstructionStep":
        return cls("perturb", deltas=tuple((lab, as_rational(e)) for lab, e in deltas))

    def describe(self) -> str:
        if self.kind == "wedge":
            c = "" if self.C is None else f" C={format_rational(self.C)}"
            return f"wedge foot={self.foot} top={self.top}{c}"
        return "perturb " + " ".join(f"{lab}={format_rational(e)}" for lab, e in self.deltas)


def wedge(P: HPolytope, foot: str, C=DEFAULT_C, top: str = None) -> HPolytope:
    C = as_rational(C)
    if C <= 0:
        raise ConstructionError(f"wedge constant must be positive, got {C}")
    if foot not in P:
        raise ConstructionError(f"foot {foot!r} is not a facet")
    if top is None or top in P:
        raise ConstructionError(f"top label {top!r} is missing or already in use")
    zero = Fraction(0)
    labels, normals = [], []
    for lab, h in zip(P.labels, P.normals):
        labels.append(lab)
        normals.append(h + ((C,) if lab == foot else (zero,)))
    labels.append(top)
    normals.append(P.normal(foot) + (-C,))
    return HPolytope(P.dim + 1, tuple(labels), tuple(normals))


def perturb(P: HPolytope, deltas: Sequence[tuple[str, object]]) -> HPolytope:
    if P.dim < 1:
        raise ConstructionError("perturbation needs a last coordinate")
    change: dict[str, Fraction] = {}
    for lab, e in deltas:
        if lab not in P:
            raise ConstructionError(f"unknown facet {lab!r} in perturbation")
        if lab in change:
            raise ConstructionError(f"facet {lab!r} perturbed twice in one step")
        change[lab] = as_rational(e)
    if not change:
        return P
    normals = tuple(
        h[:-1] + (h[-1] + change[lab],) if lab in change else h for lab, h in zip(P.labels, P.normals)
    )
    return HPolytope(P.dim, P.labels, normals)


def natural_images(P: HPolytope, wedged: HPolytope, v, foot: str) -> list[tuple]:
    """Lifts of a vertex of P into the wedge over ``foot``."""
    coords = v.coords if isinstance(v, VertexRecord) else tuple(v)
    C = wedged.normal(foot)[-1]
    val = dot(P.normal(foot), coords)
    if val == 0:
        return [coords + (Fraction(0),)]
    return [coords + (-val / C,), coords + (val / C,)]


def detect_bad_feet(P: HPolytope, graph, special: int, G: str) -> list[tuple[str, tuple[int, int]]]:
    """Feet over which wedging and perturbing ``G`` keeps ``special`` as close as before.

    A foot F is bad when a nonsimple edge inside G joins ``special`` to a vertex
    w on F, with F not incident to ``special``.  ``graph`` is a complete
    VertexGraph of P; returned edges are vertex-index pairs.
    """
    sv = graph.vertices[special]
    if G not in sv.incident:
        raise ConstructionError(f"{G!r} is not incident to the special vertex")
    out = []
    for w in graph.neighbors(special):
        wv = graph.vertices[w]
        common = sv.incident & wv.incident
        if G not in common or len(common) <= P.dim - 1:
            continue
        for F in P.ordered(wv.incident - sv.incident):
            out.append((F, (special, w)))
    return out


# -- traces and scripts -------------------------------------------------------

@dataclass
class TraceEntry:
    name: str
    polytope: HPolytope
    step: Optional[ConstructionStep] = None
    stage: int = 0  # perturbed wedges completed
    rows: list = field(default_factory=list)
    mode: str = ""  # "enumeration" | "targeted" | ""


@dataclass
class ConstructionTrace:
    entries: list
    sides: dict  # facet label -> "X" | "Y"
    wedge_columns: list = field(default_factory=list)  # side of each wedge coordinate, in order
    base_name: str = "P5"

    @property
    def final(self) -> HPolytope:
        return self.entries[-1].polytope

    @property
    def stages(self) -> int:
        return self.entries[-1].stage


def _stage_name(base: str, stage: int) -> str:
    if stage == 0:
        return base
    return f"pw^{stage} {base}" if stage > 1 else f"pw {base}"


def _is_stage(name: str, base: str) -> bool:
    return name == base or (name.startswith("pw") and name.endswith(" " + base) and "Wdg" not in name)


def replay(P: HPolytope, steps: Sequence[ConstructionStep], C=DEFAULT_C, sides: dict | None = None, base_name: str = "P5") -> ConstructionTrace:
    """Apply steps in order; a wedge followed by a perturbation forms one stage.

    Entry names follow the construction: "Wdg" prefixes each wedge, and a
    perturbation of a wedge over a stage-s polytope is named pw^(s+1).  A
    plain wedge that is wedged again keeps its "Wdg" prefix.
    """
    sides = dict(sides or {})
    entries = [TraceEntry(base_name, P)]
    cols = []
    cur = P
    stage = 0
    name = base_name
    pending = False  # last step was a wedge
    for st in steps:
        if st.kind == "wedge":
            cur = wedge(cur, st.foot, st.C if st.C is not None else C, st.top)
            if st.foot in sides:
                sides[st.top] = sides[st.foot]
                cols.append(sides[st.foot])
            else:
                cols.append("?")
            pending = True
            name = "Wdg " + name
            entries.append(TraceEntry(name, cur, st, stage))
        elif st.kind == "perturb":
            cur = perturb(cur, st.deltas)
            if pending:
                stage += 1
                inner = name[len("Wdg "):]  # the polytope that was wedged
                name = _stage_name(base_name, stage) if _is_stage(inner, base_name) else "pw " + inner
                pending = False
            entries.append(TraceEntry(name, cur, st, stage))
        else:
            raise ConstructionError(f"unknown step kind {st.kind!r}")
    return ConstructionTrace(entries, sides, cols, base_name)


_LABEL_RE = re.compile(r"^[A-Za-z0-9_.\-]+$")


def parse_script(text: str, eps=DEFAULT_EPS, C=None) -> list[ConstructionStep]:
    """Parse the line-oriented step language.

    ``wedge foot=<label> top=<label> [C=<rational>]`` and
    ``perturb <label>=<value> ...``.  A value is a rational or ``eps`` /
    ``-eps`` / ``<rational>*eps``, resolved with the given ``eps``.
    """
    eps = as_rational(eps)
    steps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *args = line.split()
        kv = []
        for a in args:
            if "=" not in a:
                raise ScriptError(lineno, f"expected key=value, got {a!r}")
            key, val = a.split("=", 1)
            kv.append((key, val))
        if head == "wedge":
            opts = dict(kv)
            if len(opts) != len(kv) or set(opts) - {"foot", "top", "C"} or not {"foot", "top"} <= set(opts):
                raise ScriptError(lineno, "wedge needs foot=<label> top=<label> [C=<rational>]")
            c = C
            if "C" in opts:
                c = _value(opts["C"], eps, lineno)
                if c <= 0:
                    raise ScriptError(lineno, "wedge constant must be positive")
            for key in ("foot", "top"):
                if not _LABEL_RE.match(opts[key]):
                    raise ScriptError(lineno, f"bad label {opts[key]!r}")
            steps.append(ConstructionStep.wedge(opts["foot"], opts["top"], c))
        elif head == "perturb":
            if not kv:
                raise ScriptError(lineno, "perturb needs at least one label=value")
            labs = [k for k, _ in kv]
            if len(set(labs)) != len(labs):
                raise ScriptError(lineno, "facet perturbed twice in one step")
            steps.append(ConstructionStep.perturb([(k, _value(v, eps, lineno)) for k, v in kv]))
        else:
            raise ScriptError(lineno, f"unknown command {head!r}")
    return steps


def _value(text: str, eps: Fraction, lineno: int) -> Fraction:
    try:
        if text in ("eps", "+eps"):
            return eps
        if text == "-eps":
            return -eps
        if text.endswith("*eps"):
            return parse_rational(text[:-4]) * eps
        return parse_rational(text)
    except RationalFormatError as exc:
        raise ScriptError(lineno, str(exc)) from None


def format_script(steps: Sequence[ConstructionStep], eps=None) -> str:
    """Render steps in the script language; values equal to ``eps`` print symbolically."""
    if eps is None:
        return "".join(st.describe() + "\n" for st in steps)
    eps = as_rational(eps)
    lines = []
    for st in steps:
        if st.kind == "wedge":
            lines.append(st.describe())
            continue
        vals = []
        for lab, e in st.deltas:
            if e == eps:
                txt = "eps"
            elif e == -eps:
                txt = "-eps"
            else:
                txt = format_rational(e)
            vals.append(f"{lab}={txt}")
        lines.append("perturb " + " ".join(vals))
    return "".join(line + "\n" for line in lines)


def load_script(path, eps=DEFAULT_EPS, C=None) -> list[ConstructionStep]:
    p = Path(path)
    if not p.exists() and (SCRIPTS_DIR / str(path)).exists():
        p = SCRIPTS_DIR / str(path)
    return parse_script(p.read_text(encoding="utf-8"), eps=eps, C=C)


# -- the three scripted constructions ------------------------------------------

X_LABELS = tuple(f"h{i}" for i in range(1, 13))
Y_LABELS = tuple(f"h{i}" for i in range(21, 34))
X_TOPS = tuple(f"h{i}" for i in range(13, 21))
Y_TOPS = tuple(f"h{i}" for i in range(34, 41))


def p5_sides() -> dict:
    return {**{lab: "X" for lab in X_LABELS}, **{lab: "Y" for lab in Y_LABELS}}


def santos_weibel_steps(eps=DEFAULT_EPS, C=None, last_pair: tuple = ("h4", "h6")) -> list[ConstructionStep]:
    """Eight wedges over h12 perturbing Y, then seven over h33 perturbing X.

    ``last_pair`` is the final X perturbation; the default pairing is
    (h4, h6), and ("h4", "h5") is available for comparison.
    """
    e = as_rational(eps)
    y_pert = [["h32"], ["h31"], ["h21", "h30"], ["h21", "h22"], ["h22", "h23"], ["h23", "h24"], ["h24", "h25"], ["h25", "h26"]]
    x_pert = [[f"h{i}" for i in range(12, 21)], ["h11"], ["h1"], ["h1", "h2"], ["h2", "h3"], ["h3", "h4"], list(last_pair)]
    steps = []
    for top, labs in zip(X_TOPS, y_pert):
        steps.append(ConstructionStep.wedge("h12", top, C))
        steps.append(ConstructionStep.perturb([(lab, e) for lab in labs]))
    for top, labs in zip(Y_TOPS, x_pert):
        steps.append(ConstructionStep.wedge("h33", top, C))
        steps.append(ConstructionStep.perturb([(lab, e) for lab in labs]))
    return steps


# Feet of the alternate constructions: the first eight X labels and first
# seven Y labels in file order, each used once.
ALT_X_FEET = X_LABELS[:8]
ALT_Y_FEET = Y_LABELS[:7]
ALT_Y_REST = Y_LABELS[7:]  # h28..h33


def remnant_facet(P5: HPolytope) -> str:
    """First unused Y facet whose perturbation leaves the others independent.

    The remaining five unperturbed Y rows must carry no dependency of their
    own, otherwise one unit of excess survives at the image of y.
    """
    rest = list(ALT_Y_REST)
    for lab in rest:
        if rank([P5.normal(g) for g in rest if g != lab]) == len(rest) - 1:
            return lab
    raise ConstructionError("no remnant facet leaves an independent complement")


def singly_perturbed_steps(eps=DEFAULT_EPS, C=None, remnant: str = "h29") -> list[ConstructionStep]:
    e = as_rational(eps)
    steps = []
    for j, (foot, top) in enumerate(zip(ALT_X_FEET, X_TOPS)):
        target = remnant if j == 0 else ALT_Y_FEET[j - 1]
        steps.append(ConstructionStep.wedge(foot, top, C))
        steps.append(ConstructionStep.perturb([(target, e)]))
    for i, (foot, top) in enumerate(zip(ALT_Y_FEET, Y_TOPS)):
        steps.append(ConstructionStep.wedge(foot, top, C))
        steps.append(ConstructionStep.perturb([(ALT_X_FEET[i], e)]))
    return steps


def pinched_steps(eps=DEFAULT_EPS, C=None) -> list[ConstructionStep]:
    e = as_rational(eps)
    steps = []
    for j, (foot, top) in enumerate(zip(ALT_X_FEET, X_TOPS)):
        if j == 0:
            pair = [(ALT_Y_REST[5], e), (ALT_Y_REST[4], -e)]
        elif j == 1:
            pair = [(ALT_Y_FEET[0], e), (ALT_Y_REST[5], -e)]
        else:
            pair = [(ALT_Y_FEET[j - 1], e), (ALT_Y_FEET[j - 2], -e)]
        steps.append(ConstructionStep.wedge(foot, top, C))
        steps.append(ConstructionStep.perturb(pair))
    for i, (foot, top) in enumerate(zip(ALT_Y_FEET, Y_TOPS)):
        steps.append(ConstructionStep.wedge(foot, top, C))
        steps.append(ConstructionStep.perturb([(ALT_X_FEET[i], e), (ALT_X_FEET[i + 1], -e)]))
    return steps


def build_santos_weibel(P5: HPolytope, C=DEFAULT_C, eps=DEFAULT_EPS, last_pair=("h4", "h6")) -> ConstructionTrace:
    return replay(P5, santos_weibel_steps(eps, last_pair=last_pair), C, p5_sides())


def build_singly_perturbed(P5: HPolytope, C=DEFAULT_C, eps=DEFAULT_EPS) -> ConstructionTrace:
    return replay(P5, singly_perturbed_steps(eps, remnant=remnant_facet(P5)), C, p5_sides())


def build_pinched(P5: HPolytope, C=DEFAULT_C, eps=DEFAULT_EPS) -> ConstructionTrace:
    return replay(P5, pinched_steps(eps), C, p5_sides())


# -- epsilon blocks -------------------------------------------------------------

@dataclass(frozen=True)
class EpsilonRankReport:
    rank_x: int
    rank_y: int
    required_x: int
    required_y: int
    block_x: tuple
    block_y: tuple

    @property
    def ok(self) -> bool:
        return self.rank_x == self.required_x and self.rank_y == self.required_y


def epsilon_blocks(trace: ConstructionTrace) -> tuple[list, list]:
    """Perturbation blocks of the final matrix.

    The X block holds X-side facet rows in the Y-wedge columns; the Y block
    holds Y-side facet rows in the X-wedge columns.
    """
    P = trace.final
    base_dim = trace.entries[0].polytope.dim
    xcols = [base_dim + 1 + i for i, s in enumerate(trace.wedge_columns) if s == "X"]
    ycols = [base_dim + 1 + i for i, s in enumerate(trace.wedge_columns) if s == "Y"]
    xrows = [h for lab, h in zip(P.labels, P.normals) if trace.sides.get(lab) == "X"]
    yrows = [h for lab, h in zip(P.labels, P.normals) if trace.sides.get(lab) == "Y"]
    block_x = [[h[c] for c in ycols] for h in xrows]
    block_y = [[h[c] for c in xcols] for h in yrows]
    return block_x, block_y


def epsilon_rank_report(trace: ConstructionTrace) -> EpsilonRankReport:
    """Ranks of the perturbation blocks against the excess each side must shed."""
    bx, by = epsilon_blocks(trace)
    ry = rank(by) if by and by[0] else 0
    rx = rank(bx) if bx and bx[0] else 0
    P0 = trace.entries[0].polytope
    nx = sum(1 for lab in P0.labels if trace.sides.get(lab) == "X")
    ny = sum(1 for lab in P0.labels if trace.sides.get(lab) == "Y")
    d0 = P0.dim
    # excess of the nonsimple vertex each side, i.e. (#facets at it) - d
    return EpsilonRankReport(rx, ry, nx - d0, ny - d0, tuple(map(tuple, bx)), tuple(map(tuple, by)))
