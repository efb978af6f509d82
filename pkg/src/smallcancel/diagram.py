"""Diagrams over a presentation as combinatorial maps.

A diagram is a set of darts (oriented edge sides) with a label, a ``twin``
(the same edge read backwards) and ``nxt`` (the following dart around the
same face).  Faces are the orbits of ``nxt``; each is either a relator cell
or one of the ``tau`` boundary faces (the holes punched into the sphere).
Vertices are the orbits of ``d -> twin(nxt(d))`` on darts, each dart standing
for the corner it makes with its successor at its head vertex.

All angles and weights are exact rationals in units of pi.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .presentation import Presentation
from .stargraph import StarGraph, build_star_graph
from .words import Word, inverse, rotate

RELATOR = "relator"
BOUNDARY = "boundary"


@dataclass(frozen=True)
class Face:
    darts: tuple[int, ...]
    kind: str = RELATOR
    relator: int | None = None
    orientation: int | None = None

    @property
    def is_boundary(self) -> bool:
        return self.kind == BOUNDARY


@dataclass(frozen=True)
class Diagram:
    labels: tuple[int, ...]
    twin: tuple[int, ...]
    nxt: tuple[int, ...]
    faces: tuple[Face, ...]

    def __post_init__(self):
        for name in ("labels", "twin", "nxt", "faces"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    @property
    def num_darts(self) -> int:
        return len(self.labels)

    @property
    def num_edges(self) -> int:
        return len(self.labels) // 2

    @cached_property
    def face_of(self) -> tuple[int, ...]:
        out = [-1] * self.num_darts
        for f, face in enumerate(self.faces):
            for d in face.darts:
                out[d] = f
        return tuple(out)

    @cached_property
    def prev(self) -> tuple[int, ...]:
        out = [0] * self.num_darts
        for d, e in enumerate(self.nxt):
            out[e] = d
        return tuple(out)

    @cached_property
    def vertex_darts(self) -> tuple[tuple[int, ...], ...]:
        """Incoming darts (= corners) around each vertex, in rotation order."""
        seen = [False] * self.num_darts
        out = []
        for d in range(self.num_darts):
            if seen[d]:
                continue
            orbit = []
            x = d
            while not seen[x]:
                seen[x] = True
                orbit.append(x)
                x = self.twin[self.nxt[x]]
            out.append(tuple(orbit))
        return tuple(out)

    @cached_property
    def head(self) -> tuple[int, ...]:
        out = [0] * self.num_darts
        for v, ds in enumerate(self.vertex_darts):
            for d in ds:
                out[d] = v
        return tuple(out)

    def tail(self, d: int) -> int:
        return self.head[self.twin[d]]

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_darts)

    @cached_property
    def relator_faces(self) -> tuple[int, ...]:
        return tuple(f for f, face in enumerate(self.faces) if not face.is_boundary)

    @cached_property
    def boundary_faces(self) -> tuple[int, ...]:
        return tuple(f for f, face in enumerate(self.faces) if face.is_boundary)

    @property
    def tau(self) -> int:
        return len(self.boundary_faces)

    @property
    def num_cells(self) -> int:
        return len(self.relator_faces)

    @property
    def euler_characteristic(self) -> int:
        """Euler characteristic of the diagram itself (sphere minus tau open cells)."""
        return self.num_vertices - self.num_edges + self.num_cells

    def is_boundary_dart(self, d: int) -> bool:
        return self.faces[self.face_of[d]].is_boundary

    @cached_property
    def boundary_corner_count(self) -> tuple[int, ...]:
        return tuple(
            sum(1 for d in ds if self.is_boundary_dart(d)) for ds in self.vertex_darts
        )

    def is_interior_vertex(self, v: int) -> bool:
        return self.boundary_corner_count[v] == 0

    def face_word(self, f: int) -> Word:
        return tuple(self.labels[d] for d in self.faces[f].darts)

    @property
    def corners(self) -> list[int]:
        """Corners of relator cells, named by their incoming dart."""
        return [d for f in self.relator_faces for d in self.faces[f].darts]

    # -- serialization -------------------------------------------------

    def to_json(self) -> dict:
        darts = [
            {
                "id": d,
                "label": {"gen": abs(a), "sign": 1 if a > 0 else -1},
                "twin": self.twin[d],
                "next": self.nxt[d],
            }
            for d, a in enumerate(self.labels)
        ]
        faces = []
        for face in self.faces:
            entry = {"darts": list(face.darts), "kind": face.kind}
            if not face.is_boundary:
                entry["relator"] = face.relator
                entry["orientation"] = face.orientation
            faces.append(entry)
        return {"darts": darts, "faces": faces}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: Mapping) -> "Diagram":
        ids = [entry["id"] for entry in data["darts"]]
        index = {d: k for k, d in enumerate(ids)}
        if len(index) != len(ids):
            raise ValueError("duplicate dart ids")
        labels, twin, nxt = [], [], []
        for entry in data["darts"]:
            lab = entry["label"]
            labels.append(lab["gen"] if lab["sign"] > 0 else -lab["gen"])
            try:
                twin.append(index[entry["twin"]])
                nxt.append(index[entry["next"]])
            except KeyError as exc:
                raise ValueError(f"reference to unknown dart {exc.args[0]}") from None
        faces = []
        for entry in data["faces"]:
            try:
                darts = tuple(index[d] for d in entry["darts"])
            except KeyError as exc:
                raise ValueError(f"face refers to unknown dart {exc.args[0]}") from None
            kind = entry.get("kind", RELATOR)
            if kind not in (RELATOR, BOUNDARY):
                raise ValueError(f"unknown face kind {kind!r}")
            faces.append(Face(darts, kind, entry.get("relator"), entry.get("orientation")))
        return cls(tuple(labels), tuple(twin), tuple(nxt), tuple(faces))

    def to_dot(self, names: tuple[str, ...] | None = None) -> str:
        lines = ["digraph diagram {"]
        for v in range(self.num_vertices):
            shape = "circle" if self.is_interior_vertex(v) else "doublecircle"
            lines.append(f'  v{v} [shape={shape}, label="{v}"];')
        for d in range(self.num_darts):
            if d < self.twin[d]:
                a = self.labels[d]
                name = names[abs(a) - 1] if names else f"x{abs(a)}"
                label = name if a > 0 else name + "^-1"
                lines.append(f'  v{self.tail(d)} -> v{self.head[d]} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


# -- validation -----------------------------------------------------------


@dataclass(frozen=True)
class DiagramReport:
    ok: bool
    findings: tuple[str, ...] = ()
    tau: int | None = None
    rotations: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"ok": self.ok, "findings": list(self.findings), "tau": self.tau}


def _find_rotation(word: Word, target: Word) -> int | None:
    if len(word) != len(target):
        return None
    for k in range(len(target)):
        if rotate(target, k) == word:
            return k
    return None


def validate_diagram(P: Presentation, M: Diagram) -> DiagramReport:
    findings: list[str] = []
    n = M.num_darts
    if n == 0:
        return DiagramReport(False, ("diagram has no darts",))
    if not (len(M.twin) == len(M.nxt) == n):
        return DiagramReport(False, ("dart arrays have different lengths",))
    for d in range(n):
        t = M.twin[d]
        if not 0 <= t < n or t == d or M.twin[t] != d:
            findings.append(f"twin is not a fixed-point-free involution at dart {d}")
        elif M.labels[t] != -M.labels[d]:
            findings.append(f"dart {d} and its twin do not carry inverse labels")
        if not 1 <= abs(M.labels[d]) <= P.n:
            findings.append(f"dart {d} has a label outside the generators")
    if sorted(M.nxt) != list(range(n)):
        findings.append("next is not a permutation of the darts")
    if findings:
        return DiagramReport(False, tuple(findings))

    owner = [-1] * n
    for f, face in enumerate(M.faces):
        if not face.darts:
            findings.append(f"face {f} is empty")
            continue
        k = len(face.darts)
        for t, d in enumerate(face.darts):
            if owner[d] != -1:
                findings.append(f"dart {d} belongs to faces {owner[d]} and {f}")
            owner[d] = f
            if M.nxt[d] != face.darts[(t + 1) % k]:
                findings.append(f"face {f} is not an orbit of next at dart {d}")
                break
    if any(o == -1 for o in owner):
        findings.append("some darts belong to no face")
    if findings:
        return DiagramReport(False, tuple(findings))

    rotations = {}
    for f, face in enumerate(M.faces):
        if face.is_boundary:
            continue
        i, o = face.relator, face.orientation
        if i is None or not 0 <= i < len(P.relators) or o not in (1, -1):
            findings.append(f"face {f} lacks a valid relator index and orientation")
            continue
        target = P.relators[i].letters if o == 1 else inverse(P.relators[i].letters)
        rho = _find_rotation(M.face_word(f), target)
        if rho is None:
            findings.append(f"face {f} does not read a cyclic permutation of relator {i}^{o}")
        else:
            rotations[f] = rho

    # connectivity via twin and next
    seen = {0}
    stack = [0]
    while stack:
        d = stack.pop()
        for e in (M.twin[d], M.nxt[d]):
            if e not in seen:
                seen.add(e)
                stack.append(e)
    if len(seen) != n:
        findings.append("diagram is not connected")
    chi_sphere = M.num_vertices - M.num_edges + len(M.faces)
    if chi_sphere != 2:
        findings.append(f"underlying surface is not a sphere (V - E + F = {chi_sphere})")
    return DiagramReport(not findings, tuple(findings), M.tau, rotations)


def face_rotations(P: Presentation, M: Diagram) -> dict[int, int]:
    report = validate_diagram(P, M)
    if not report.ok:
        raise ValueError("invalid diagram: " + "; ".join(report.findings))
    return report.rotations


# -- boundary ------------------------------------------------------------


def boundary_data(M: Diagram) -> tuple[list[Word], int]:
    """Boundary words (read with the cells on the left) and total boundary length."""
    if M.tau == 0:
        raise ValueError("a spherical diagram has no boundary")
    words = [inverse(M.face_word(f)) for f in M.boundary_faces]
    return words, sum(len(w) for w in words)


# -- suppression of interior valence-2 vertices ---------------------------


@dataclass(frozen=True)
class LongEdge:
    darts: tuple[int, ...]
    word: Word
    interior: bool
    closed: bool = False


@dataclass
class SuppressedView:
    diagram: Diagram
    suppressed: list[bool]
    long_edges: list[LongEdge]

    def valence(self, v: int) -> int:
        return len(self.diagram.vertex_darts[v])

    @property
    def surviving_vertices(self) -> list[int]:
        return [v for v in range(self.diagram.num_vertices) if not self.suppressed[v]]

    @property
    def inner_vertices(self) -> list[int]:
        M = self.diagram
        return [v for v in self.surviving_vertices if M.is_interior_vertex(v)]

    def degree(self, f: int) -> int:
        M = self.diagram
        return sum(1 for d in M.faces[f].darts if not self.suppressed[M.head[d]])

    def is_inner_cell(self, f: int) -> bool:
        M = self.diagram
        return all(M.is_interior_vertex(M.head[d]) for d in M.faces[f].darts)

    @property
    def num_long_edges(self) -> int:
        return len(self.long_edges)


def suppressed_view(M: Diagram) -> SuppressedView:
    suppressed = []
    for v, ds in enumerate(M.vertex_darts):
        loop = len(ds) == 2 and M.twin[ds[0]] == ds[1]
        suppressed.append(M.is_interior_vertex(v) and len(ds) == 2 and not loop)
    covered = [False] * M.num_darts
    long_edges = []
    for d in range(M.num_darts):
        if covered[d] or suppressed[M.tail(d)]:
            continue
        path = [d]
        while suppressed[M.head[path[-1]]]:
            a, b = M.vertex_darts[M.head[path[-1]]]
            other = b if a == path[-1] else a
            path.append(M.twin[other])
        for x in path:
            covered[x] = True
            covered[M.twin[x]] = True
        interior = not any(M.is_boundary_dart(x) or M.is_boundary_dart(M.twin[x]) for x in path)
        long_edges.append(LongEdge(tuple(path), tuple(M.labels[x] for x in path), interior))
    for d in range(M.num_darts):
        if covered[d]:
            continue
        # a cycle made only of suppressed vertices
        path = [d]
        while True:
            a, b = M.vertex_darts[M.head[path[-1]]]
            other = b if a == path[-1] else a
            nxt = M.twin[other]
            if nxt == d:
                break
            path.append(nxt)
        for x in path:
            covered[x] = True
            covered[M.twin[x]] = True
        long_edges.append(LongEdge(tuple(path), tuple(M.labels[x] for x in path), True, True))
    return SuppressedView(M, suppressed, long_edges)


# -- links of vertices in the star graph ---------------------------------


@dataclass(frozen=True)
class LinkComponent:
    vertex: int
    closed: bool
    corners: tuple[int, ...]
    star_darts: tuple[int, ...]


def corner_star_dart(P: Presentation, S: StarGraph, M: Diagram, rotations, c: int) -> int:
    """Image in the star graph of the corner between dart ``c`` and its successor."""
    f = M.face_of[c]
    face = M.faces[f]
    i, o = face.relator, face.orientation
    L = len(face.darts)
    k = face.darts.index(c)
    t = (rotations[f] + k) % L
    period = len(P.roots[i][0])
    if o == 1:
        return 2 * S.edge_index[(i, t % period)]
    q = (L - 2 - t) % L
    return 2 * S.edge_index[(i, q % period)] + 1


def vertex_links(P: Presentation, M: Diagram, S: StarGraph | None = None) -> list[LinkComponent]:
    S = S or build_star_graph(P)
    rot = face_rotations(P, M)
    out = []
    for v, ds in enumerate(M.vertex_darts):
        if M.is_interior_vertex(v):
            runs, closed = [list(ds)], True
        else:
            k = next(j for j, d in enumerate(ds) if M.is_boundary_dart(d))
            order = ds[k + 1 :] + ds[: k + 1]
            runs, cur, closed = [], [], False
            for d in order:
                if M.is_boundary_dart(d):
                    if cur:
                        runs.append(cur)
                    cur = []
                else:
                    cur.append(d)
        for run in runs:
            star = tuple(corner_star_dart(P, S, M, rot, c) for c in run)
            out.append(LinkComponent(v, closed, tuple(run), star))
    return out


@dataclass(frozen=True)
class ReductionWitness:
    vertex: int
    corners: tuple[int, int]
    star_edge: int
    backtrack: bool

    def to_json(self) -> dict:
        return {
            "vertex": self.vertex,
            "corners": list(self.corners),
            "star_edge": self.star_edge,
            "backtracking": self.backtrack,
        }


def reduction_witnesses(P: Presentation, M: Diagram, backtrack_only: bool = False):
    """Yield every pair of link corners mapping to one star edge in opposite directions."""
    for comp in vertex_links(P, M):
        n = len(comp.corners)
        if backtrack_only:
            pairs = [(t, t + 1) for t in range(n - 1)]
            if comp.closed and n >= 1:
                pairs.append((n - 1, 0))
        else:
            pairs = [(s, t) for s in range(n) for t in range(n) if s != t]
        for s, t in pairs:
            a, b = comp.star_darts[s], comp.star_darts[t]
            if a == b ^ 1:
                adjacent = t == (s + 1) % n and (comp.closed or t == s + 1)
                yield ReductionWitness(comp.vertex, (comp.corners[s], comp.corners[t]), a >> 1, adjacent)


def is_vertex_reduced(P: Presentation, M: Diagram) -> tuple[bool, ReductionWitness | None]:
    w = next(reduction_witnesses(P, M), None)
    return w is None, w


def is_reduced(P: Presentation, M: Diagram) -> tuple[bool, ReductionWitness | None]:
    w = next(reduction_witnesses(P, M, backtrack_only=True), None)
    return w is None, w


# -- weights and curvature -----------------------------------------------

WeightFunction = dict  # corner (incoming dart of a relator cell) -> Fraction, units of pi


def curvature_check(M: Diagram, g: Mapping[int, Fraction]) -> tuple[Fraction, Fraction]:
    """Total curvature of vertices and cells, and ``2 chi``, both in units of pi.

    A vertex met ``m`` times by the boundary paths has curvature
    ``2 - g(v) - m``: this is ``2 - g(v)`` inside and ``1 - g(v)`` at an
    ordinary boundary vertex, and treats a pinch point as ``m`` separate
    boundary vertices.
    """
    corners = M.corners
    missing = [c for c in corners if c not in g]
    if missing:
        raise ValueError(f"weight function is undefined on corners {missing[:5]}")
    vertex_part = Fraction(0)
    for v, ds in enumerate(M.vertex_darts):
        gv = sum((Fraction(g[d]) for d in ds if not M.is_boundary_dart(d)), Fraction(0))
        vertex_part += 2 - gv - M.boundary_corner_count[v]
    cell_part = Fraction(0)
    for f in M.relator_faces:
        darts = M.faces[f].darts
        gd = sum((Fraction(g[d]) for d in darts), Fraction(0))
        cell_part += gd - (len(darts) - 2)
    lhs = vertex_part + cell_part
    rhs = Fraction(2 * (2 - M.tau))
    return lhs, rhs


def pe_weights(M: Diagram, view: SuppressedView | None = None) -> dict[int, Fraction]:
    """Angles of regular polygons: ``(d - 2)/d`` at each corner of a degree-``d`` cell.

    Corners at suppressed valence-2 vertices are not corners of the suppressed
    skeleton; they get the straight angle 1, which leaves every curvature sum
    unchanged.
    """
    view = view or suppressed_view(M)
    g = {}
    for f in M.relator_faces:
        d = view.degree(f)
        for c in M.faces[f].darts:
            g[c] = Fraction(1) if view.suppressed[M.head[c]] else Fraction(d - 2, d)
    return g


@dataclass(frozen=True)
class WeightTestResult:
    holds: bool
    bound: Fraction
    measured: int
    failures: tuple[str, ...] = ()

    @property
    def within_bound(self) -> bool:
        return self.measured <= self.bound


def verify_weight_hypotheses(
    M: Diagram,
    g: Mapping[int, Fraction],
    eps: Fraction,
    N: Fraction = Fraction(0),
    variant: str = "vertices",
) -> WeightTestResult:
    """Check the weight-test hypotheses and return the linear bound they imply.

    ``variant="vertices"``: cells ``g(D) <= d(D) - 2``, inner vertices
    ``g(v) >= 2 + eps``, boundary ``g >= -N l``; bounds the vertex count.
    ``variant="cells"``: cells ``g(D) <= d(D) - 2 - eps``, inner vertices
    ``g(v) >= 2``; bounds the cell count.  Everything is measured on the
    skeleton with interior valence-2 vertices suppressed.
    """
    eps, N = Fraction(eps), Fraction(N)
    if eps <= 0 or N < 0:
        raise ValueError("need eps > 0 and N >= 0")
    if variant not in ("vertices", "cells"):
        raise ValueError(f"unknown variant {variant!r}")
    view = suppressed_view(M)
    live = lambda c: not view.suppressed[M.head[c]]  # noqa: E731
    failures = []
    cell_slack = eps if variant == "cells" else 0
    for f in M.relator_faces:
        gd = sum((Fraction(g[c]) for c in M.faces[f].darts if live(c)), Fraction(0))
        if gd > view.degree(f) - 2 - cell_slack:
            failures.append(f"cell {f}: weight {gd} exceeds {view.degree(f) - 2 - cell_slack}")
    vertex_need = 2 + (eps if variant == "vertices" else 0)
    for v in view.inner_vertices:
        gv = sum((Fraction(g[c]) for c in M.vertex_darts[v]), Fraction(0))
        if gv < vertex_need:
            failures.append(f"vertex {v}: weight {gv} below {vertex_need}")
    length = sum(len(M.faces[f].darts) for f in M.boundary_faces)
    g_boundary = Fraction(0)
    for v in range(M.num_vertices):
        if not M.is_interior_vertex(v) and not view.suppressed[v]:
            g_boundary += sum(
                (Fraction(g[c]) for c in M.vertex_darts[v] if not M.is_boundary_dart(c)), Fraction(0)
            )
    if g_boundary < -N * length:
        failures.append(f"boundary weight {g_boundary} below {-N * length}")
    if variant == "vertices":
        k = 2 if M.euler_characteristic >= 0 else 4
        bound = (k + N) / eps * length
        measured = len(view.surviving_vertices)
    else:
        bound = (3 + N) / eps * length
        measured = M.num_cells
    return WeightTestResult(not failures, bound, measured, tuple(failures))


def random_weights(M: Diagram, rng, lo: int = -3, hi: int = 3, denom: int = 12) -> dict[int, Fraction]:
    return {c: Fraction(rng.randint(lo * denom, hi * denom), rng.randint(1, denom)) for c in M.corners}


def relabel(
    labels: Mapping[int, int],
    twin: Mapping[int, int],
    nxt: Mapping[int, int],
    faces: Iterable[Face],
) -> tuple[Diagram, dict[int, int]]:
    """Build a compact diagram from dart-keyed maps; also return old -> new ids."""
    faces = list(faces)
    order = [d for face in faces for d in face.darts]
    index = {d: k for k, d in enumerate(order)}
    diag = Diagram(
        tuple(labels[d] for d in order),
        tuple(index[twin[d]] for d in order),
        tuple(index[nxt[d]] for d in order),
        tuple(Face(tuple(index[d] for d in f.darts), f.kind, f.relator, f.orientation) for f in faces),
    )
    return diag, index
