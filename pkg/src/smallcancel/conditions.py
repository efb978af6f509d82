"""Degree/valence tables for W*, W, V*, V and the presentation-level certifiers.

The certifiers are sufficient tests: ``Certified`` is a proof that the
presentation has the type, ``NotCertified`` only says this method found a
local configuration it could not rule out.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .pieces import (
    PieceTable,
    compute_pieces,
    enumerate_decompositions,
    min_cut_decomposition,
    min_piece_decomposition,
)
from .presentation import Presentation, require_valid
from .stargraph import (
    Circuit,
    StarGraph,
    build_star_graph,
    corner_word,
    enumerate_reduced_circuits,
    min_circuit_length_through,
)


class Condition(str, enum.Enum):
    WSTAR = "W*"
    W = "W"
    VSTAR = "V*"
    V = "V"

    @classmethod
    def parse(cls, text: "str | Condition") -> "Condition":
        if isinstance(text, Condition):
            return text
        key = text.strip().lower().replace("*", "star")
        for c in cls:
            if c.name.lower() == key:
                return c
        raise ValueError(f"unknown condition {text!r}")

    @property
    def strict(self) -> bool:
        return self in (Condition.VSTAR, Condition.V)

    @property
    def is_vertex_condition(self) -> bool:
        return self in (Condition.WSTAR, Condition.VSTAR)


# columns sorted ascending, transcribed row by row from the published tables
W_TABLES: dict[int, list[tuple[int, ...]]] = {
    3: [
        (3, 7, 42), (3, 8, 24), (3, 9, 18), (3, 10, 15), (3, 11, 14), (3, 12, 12),
        (4, 5, 20), (4, 6, 12), (4, 7, 10), (4, 8, 8),
        (5, 5, 10), (5, 6, 8), (5, 7, 7),
        (6, 6, 6),
    ],
    4: [(3, 3, 4, 12), (3, 3, 5, 8), (3, 3, 6, 6), (3, 4, 4, 6), (3, 4, 5, 5), (4, 4, 4, 4)],
    5: [(3, 3, 3, 3, 6), (3, 3, 3, 4, 4)],
}

V_TABLES: dict[int, list[tuple[int, ...]]] = {
    3: [
        (3, 7, 43), (3, 8, 25), (3, 9, 19), (3, 10, 16), (3, 11, 14), (3, 12, 13),
        (4, 5, 21), (4, 6, 13), (4, 7, 10), (4, 8, 9),
        (5, 5, 11), (5, 6, 8), (5, 7, 7),
        (6, 6, 7),
    ],
    4: [(3, 3, 4, 13), (3, 3, 5, 8), (3, 3, 6, 7), (3, 4, 4, 7), (3, 4, 5, 5), (4, 4, 4, 5)],
    5: [(3, 3, 3, 3, 7), (3, 3, 3, 4, 5), (3, 3, 4, 4, 4)],
}


def tables_for(cond: Condition) -> dict[int, list[tuple[int, ...]]]:
    return V_TABLES if Condition.parse(cond).strict else W_TABLES


def table_lookup(cond: Condition | str, k: int, values: Iterable[float]) -> bool:
    """Whether ``k`` lower bounds dominate some column of the ``k``-table."""
    cond = Condition.parse(cond)
    vals = sorted(values)
    if len(vals) != k or k < 3:
        raise ValueError(f"need exactly k >= 3 values, got k={k} and {len(vals)} values")
    if vals[0] < 3:
        return False
    if cond.strict:
        if k >= 7:
            return True
        if k == 6:
            return vals[-1] > 3
    elif k >= 6:
        return True
    return any(all(v >= c for v, c in zip(vals, col)) for col in tables_for(cond)[k])


def max_table_valence(cond: Condition) -> int:
    # beyond this size the rule is unconditional (all entries at least 3)
    return 6 if Condition.parse(cond).strict else 5


@dataclass(frozen=True)
class CheckOutcome:
    condition: Condition
    certified: bool
    witness: dict | None = None
    bounds: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "Certified" if self.certified else "NotCertified"

    def to_json(self) -> dict:
        return {
            "condition": self.condition.value,
            "verdict": self.verdict,
            "witness": self.witness,
            "bounds": self.bounds,
        }


def _num(x: float):
    return None if x == math.inf else int(x)


def relator_degree_bounds(table: PieceTable) -> list[float]:
    return [min_piece_decomposition(table, i) for i in range(len(table.presentation.relators))]


def circuit_overlaps(P: Presentation, S: StarGraph, c: Circuit) -> tuple[list[tuple], list[int]]:
    """Cell words read away from a vertex with link ``c``, and how far neighbours agree.

    Consecutive cells around the vertex share an edge whose label is a common
    stretch of both relators read away from the vertex, so its length is at
    most ``overlap[t]`` for the cells ``t`` and ``t + 1``.
    """
    words = [corner_word(P, S, d)[2] for d in c.darts]
    ahead = [w[1:] + w[:1] for w in words]
    k = len(words)
    overlap = []
    for t in range(k):
        w = words[(t + 1) % k]
        behind = tuple(-a for a in (w[:1] + w[:0:-1]))
        overlap.append(max(1, _common_prefix(ahead[t], behind)))
    return ahead, overlap


def circuit_degree_options(P: Presentation, S: StarGraph, table: PieceTable, c: Circuit):
    """Yield ``(shared_lengths, degree_lower_bounds)`` for every way the shared edges can end."""
    ahead, overlap = circuit_overlaps(P, S, c)
    k = len(ahead)
    for shared in itertools.product(*(range(1, x + 1) for x in overlap)):
        degs = [
            min_cut_decomposition(table.pieces, ahead[t], shared[t], shared[t - 1]) for t in range(k)
        ]
        if all(d < math.inf for d in degs):
            yield shared, degs


def _common_prefix(a, b) -> int:
    k = 0
    for x, y in zip(a, b):
        if x != y:
            break
        k += 1
    return k


def check_vertex_condition(P: Presentation, cond: Condition | str = Condition.WSTAR) -> CheckOutcome:
    cond = Condition.parse(cond)
    if not cond.is_vertex_condition:
        raise ValueError(f"{cond.value} is a cell condition")
    require_valid(P)
    table = compute_pieces(P)
    dmin = relator_degree_bounds(table)
    bounds = {"degree_lower_bounds": [_num(d) for d in dmin], "max_piece_length": table.max_length}
    for i, d in enumerate(dmin):
        if not 3 <= d < math.inf:
            witness = {
                "kind": "c3",
                "relator": i,
                "relator_word": P.format(P.relators[i].letters),
                "min_pieces": _num(d),
            }
            if d < math.inf:
                dec = enumerate_decompositions(table, i, int(d))
                witness["decomposition"] = dec[0].to_json(P) if dec else None
            return CheckOutcome(cond, False, witness, bounds)
    S = build_star_graph(P)
    kmax = max_table_valence(cond)
    circuits = enumerate_reduced_circuits(S, kmax)
    checked = 0
    for c in circuits:
        # links in vertex reduced diagrams never pass a star edge both ways
        if len(c) < 3 or c.passes_edge_both_ways():
            continue
        checked += 1
        for shared, degs in circuit_degree_options(P, S, table, c):
            if not table_lookup(cond, len(c), degs):
                witness = {
                    "kind": "circuit",
                    "circuit": c.to_json(S),
                    "shared_edge_lengths": list(shared),
                    "degree_lower_bounds": [_num(x) for x in degs],
                }
                return CheckOutcome(cond, False, witness, bounds)
    bounds["circuits_checked"] = checked
    return CheckOutcome(cond, True, None, bounds)


def corner_edge(P: Presentation, S: StarGraph, relator: int, breakpoint: int) -> int:
    """Star-graph edge of the corner just before position ``breakpoint`` of a relator."""
    period = len(P.roots[relator][0])
    return S.edge_index[(relator, (breakpoint - 1) % period)]


def check_cell_condition(P: Presentation, cond: Condition | str = Condition.W) -> CheckOutcome:
    cond = Condition.parse(cond)
    if cond.is_vertex_condition:
        raise ValueError(f"{cond.value} is a vertex condition")
    require_valid(P)
    table = compute_pieces(P)
    S = build_star_graph(P)
    mcl = [min_circuit_length_through(S, e) for e in range(len(S.edges))]
    bounds = {
        "edge_valence_lower_bounds": [_num(x) for x in mcl],
        "degree_lower_bounds": [_num(d) for d in relator_degree_bounds(table)],
    }
    checked = 0
    for i in range(len(P.relators)):
        for d in range(1, max_table_valence(cond) + 1):
            for dec in enumerate_decompositions(table, i, d):
                checked += 1
                edges = [corner_edge(P, S, i, b) for b in dec.breakpoints]
                # surviving interior vertices have valence >= 3
                vals = [max(3, mcl[e]) for e in edges]
                if d < 3 or not table_lookup(cond, d, vals):
                    witness = {
                        "kind": "decomposition",
                        "decomposition": dec.to_json(P),
                        "corner_edges": edges,
                        "valence_lower_bounds": [_num(v) for v in vals],
                    }
                    return CheckOutcome(cond, False, witness, bounds)
    bounds["decompositions_checked"] = checked
    return CheckOutcome(cond, True, None, bounds)


@lru_cache(maxsize=256)
def certify(P: Presentation, cond: Condition | str) -> CheckOutcome:
    cond = Condition.parse(cond)
    if cond.is_vertex_condition:
        return check_vertex_condition(P, cond)
    return check_cell_condition(P, cond)


def witness_refutes(cond: Condition | str, outcome: CheckOutcome) -> bool:
    """Re-check a NotCertified witness against the tables."""
    w = outcome.witness or {}
    if w.get("kind") == "circuit":
        vals = [math.inf if x is None else x for x in w["degree_lower_bounds"]]
        return not table_lookup(cond, len(vals), vals)
    if w.get("kind") == "decomposition":
        vals = [math.inf if x is None else x for x in w["valence_lower_bounds"]]
        return len(vals) < 3 or not table_lookup(cond, len(vals), vals)
    if w.get("kind") == "c3":
        m = w["min_pieces"]
        return m is None or m < 3
    return False


def angle_excess(cond: Condition | str, column: Sequence[int]) -> Fraction:
    """Angle sum minus 2, in units of pi, for a column read as degrees around a vertex.

    The same number measures the slack of the dual reading (valences around a
    cell, angle ``2/k`` each) against ``d - 2``.
    """
    return sum(Fraction(d - 2, d) for d in column) - 2


def diagram_type_check(P: Presentation, M, cond: Condition | str) -> bool:
    """Evaluate the defining angle inequality of ``cond`` directly on a diagram."""
    from .diagram import suppressed_view, validate_diagram

    cond = Condition.parse(cond)
    report = validate_diagram(P, M)
    if not report.ok:
        raise ValueError("invalid diagram: " + "; ".join(report.findings))
    view = suppressed_view(M)
    if cond.is_vertex_condition:
        degree = {f: view.degree(f) for f in M.relator_faces}
        if any(d < 3 for d in degree.values()):
            return False
        for v in view.inner_vertices:
            total = sum(Fraction(degree[M.face_of[c]] - 2, degree[M.face_of[c]]) for c in M.vertex_darts[v])
            if total < 2 or (cond.strict and total == 2):
                return False
        return True
    for f in M.relator_faces:
        if not view.is_inner_cell(f):
            continue
        corners = [c for c in M.faces[f].darts if not view.suppressed[M.head[c]]]
        total = sum(Fraction(2, view.valence(M.head[c])) for c in corners)
        limit = len(corners) - 2
        if total > limit or (cond.strict and total == limit):
            return False
    return True
