"""Exact wedge / perturbation constructions on H-represented polytopes."""

from .exact import QMatrix, Rational, format_rational, nullspace, parse_rational, rank, solve
from .hrep import HPolytope, VertexRecord, load_p5, load_polytope, parse_polytope, save_polytope, serialize_polytope
from .enumeration import DEFAULT_BUDGET, BudgetExceeded, VertexGraph, adjacency_graph, enumerate_vertices, is_simple_vertex, vertex_graph
from .faces import (
    FaceRecord,
    affine_support_check,
    face_dimension,
    find_nonsimplicities,
    maximality_closure,
    measure_face,
    relative_interior_point,
    verify_nonsimplicity,
)
from .construction import (
    ConstructionStep,
    ConstructionTrace,
    build_pinched,
    build_santos_weibel,
    build_singly_perturbed,
    detect_bad_feet,
    epsilon_rank_report,
    natural_images,
    parse_script,
    perturb,
    replay,
    wedge,
)
from .paths import all_but_simple_check, distance, hirsch_gap, nonrevisiting_path_exists, spindle_check
from .tables import TableRow, annotate

__version__ = "0.1.0"
