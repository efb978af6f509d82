"""Reduction moves on diagrams.

A move takes two cells ``D1 != D2`` that carry the same relator with
opposite orientations and meet at a vertex ``Q`` so that their corners there
are mirror images.  Both cells are cut out and their boundary paths, read away
from ``Q``, are zipped together.  The surface may fall apart; every connected
piece is returned as its own diagram.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .diagram import Diagram, Face, is_vertex_reduced, relabel, reduction_witnesses, validate_diagram
from .presentation import Presentation


class MoveError(ValueError):
    pass


@dataclass(frozen=True)
class Site:
    """``d1`` leaves ``Q`` in the first cell, ``d2`` enters ``Q`` in the second."""

    d1: int
    d2: int


def site_problems(M: Diagram, site: Site, kind: str = "vertex") -> list[str]:
    if kind not in ("vertex", "edge"):
        return [f"unknown move kind {kind!r}"]
    d1, d2 = site.d1, site.d2
    if not (0 <= d1 < M.num_darts and 0 <= d2 < M.num_darts):
        return ["site darts out of range"]
    f1, f2 = M.face_of[d1], M.face_of[d2]
    F1, F2 = M.faces[f1], M.faces[f2]
    problems = []
    if F1.is_boundary or F2.is_boundary:
        problems.append("site darts must lie in relator cells")
    if f1 == f2:
        problems.append("the two cells coincide")
    if F1.relator != F2.relator or F1.orientation != -F2.orientation:
        problems.append("cells do not carry one relator with opposite orientations")
    if len(F1.darts) != len(F2.darts):
        problems.append("cells have different lengths")
    if M.tail(d1) != M.head[d2]:
        problems.append("site darts do not meet at a common vertex")
    if kind == "edge" and M.twin[d1] != d2:
        problems.append("cells do not share the site edge")
    if problems:
        return problems
    p, r = d1, d2
    for _ in range(len(F1.darts)):
        if M.labels[p] != -M.labels[r]:
            return ["boundary paths of the two cells do not match"]
        p, r = M.nxt[p], M.prev[r]
    return []


def _zip(M: Diagram, deleted: set[int], partner: Mapping[int, int]) -> list[Diagram]:
    """Remove ``deleted`` darts, gluing the sides that faced ``x`` and ``partner[x]``."""
    twin = {}
    for a in range(M.num_darts):
        if a in deleted:
            continue
        x = M.twin[a]
        while x in deleted:
            x = M.twin[partner[x]]
        if x == a:
            raise MoveError(f"dart {a} would be glued to itself")
        twin[a] = x
    faces = [f for f in M.faces if not deleted.intersection(f.darts)]
    alive = [a for a in range(M.num_darts) if a not in deleted]

    # split into connected pieces along twin and next
    comp = {}
    for a in alive:
        if a in comp:
            continue
        comp[a] = a
        stack = [a]
        while stack:
            x = stack.pop()
            for y in (twin[x], M.nxt[x]):
                if y not in comp:
                    comp[y] = a
                    stack.append(y)
    roots = sorted(set(comp.values()))
    labels = {a: M.labels[a] for a in alive}
    nxt = {a: M.nxt[a] for a in alive}
    out = []
    for root in roots:
        part = [f for f in faces if comp[f.darts[0]] == root]
        diag, _ = relabel(labels, twin, nxt, part)
        out.append(diag)
    return out


def reduction_move(P: Presentation, M: Diagram, kind: str, site: Site) -> list[Diagram]:
    """Cancel the cell pair at ``site``; returns the resulting diagrams.

    The first returned diagram is the one carrying the boundary faces, when
    there are any.
    """
    problems = site_problems(M, site, kind)
    if problems:
        raise MoveError("; ".join(problems))
    L = len(M.faces[M.face_of[site.d1]].darts)
    partner = {}
    p, r = site.d1, site.d2
    for _ in range(L):
        partner[p] = r
        partner[r] = p
        p, r = M.nxt[p], M.prev[r]
    parts = _zip(M, set(partner), partner)
    parts.sort(key=lambda D: D.tau == 0)
    return parts


def site_from_witness(M: Diagram, corners: tuple[int, int]) -> Site:
    a, b = corners
    return Site(M.nxt[a], b)


def find_site(P: Presentation, M: Diagram) -> tuple[str, Site] | None:
    for w in reduction_witnesses(P, M):
        site = site_from_witness(M, w.corners)
        if not site_problems(M, site, "vertex"):
            kind = "edge" if M.twin[site.d1] == site.d2 else "vertex"
            return kind, site
    return None


@dataclass(frozen=True)
class MoveRecord:
    kind: str
    site: Site
    cells_before: int
    cells_after: int
    components: int


def reduce_diagram(P: Presentation, M: Diagram, max_moves: int = 10_000) -> tuple[Diagram, list[MoveRecord]]:
    """Apply moves until the diagram is vertex reduced, keeping the boundary-carrying part."""
    log = []
    for _ in range(max_moves):
        ok, _ = is_vertex_reduced(P, M)
        if ok:
            return M, log
        found = find_site(P, M)
        if found is None:
            raise MoveError("diagram is not vertex reduced but no cancellable pair was found")
        kind, site = found
        parts = reduction_move(P, M, kind, site)
        log.append(MoveRecord(kind, site, M.num_cells, sum(D.num_cells for D in parts), len(parts)))
        M = parts[0]
    raise MoveError("move limit reached")


def mirror(M: Diagram) -> Diagram:
    """The same diagram seen from the other side of the sphere."""
    faces = tuple(
        Face(
            tuple(reversed(f.darts)),
            f.kind,
            f.relator,
            None if f.orientation is None else -f.orientation,
        )
        for f in M.faces
    )
    # reversing a face reverses next, and the reversed dart sequence reads with inverted labels
    labels = tuple(-a for a in M.labels)
    twin_labels = tuple(M.twin)
    return Diagram(labels, twin_labels, M.prev, faces)


def double(M: Diagram) -> list[Diagram]:
    """Glue a disk to its mirror image along the boundary.

    A disk with cut vertices doubles to a one-point union of spheres, which
    comes back as one sphere per piece.
    """
    if M.tau != 1:
        raise MoveError("doubling needs exactly one boundary face")
    W = mirror(M)
    n = M.num_darts
    both = Diagram(
        M.labels + W.labels,
        M.twin + tuple(t + n for t in W.twin),
        M.nxt + tuple(x + n for x in W.nxt),
        M.faces
        + tuple(Face(tuple(d + n for d in f.darts), f.kind, f.relator, f.orientation) for f in W.faces),
    )
    boundary = M.faces[M.boundary_faces[0]].darts
    partner = {}
    for b in boundary:
        partner[b] = b + n
        partner[b + n] = b
    return _zip(both, set(partner), partner)


def assert_valid(P: Presentation, M: Diagram) -> None:
    report = validate_diagram(P, M)
    if not report.ok:
        raise MoveError("invalid diagram: " + "; ".join(report.findings))
