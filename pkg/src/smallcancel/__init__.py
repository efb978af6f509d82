"""Small cancellation style conditions for group presentations and diagram tools."""

from .conditions import (
    CheckOutcome,
    Condition,
    certify,
    check_cell_condition,
    check_vertex_condition,
    diagram_type_check,
    table_lookup,
)
from .diagram import (
    Diagram,
    Face,
    boundary_data,
    curvature_check,
    is_reduced,
    is_vertex_reduced,
    pe_weights,
    suppressed_view,
    validate_diagram,
    verify_weight_hypotheses,
)
from .moves import reduction_move
from .pieces import compute_pieces, enumerate_decompositions, min_piece_decomposition
from .presentation import Presentation, PresentationError, parse_presentation, parse_word, validate
from .solvers import Verdict, area_bound, conj_length_bound, solve_conjugacy, solve_word, verify_witness
from .stargraph import build_star_graph, build_whitehead_graph, enumerate_reduced_circuits

__version__ = "0.1.0"
