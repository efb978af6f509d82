"""Seeded random diagrams for property tests and the CLI.

Disks grow one cell at a time: a fresh relator cell is glued along a run of
consecutive boundary darts whose labels it can absorb.  Spheres are doubled
disks, annuli come from turning a cell into a hole or pinching the boundary.
"""

from __future__ import annotations

import random

from .diagram import BOUNDARY, RELATOR, Diagram, Face, is_vertex_reduced, relabel, validate_diagram
from .moves import double
from .presentation import Presentation
from .stargraph import StarGraph, build_star_graph, corner_word, enumerate_reduced_circuits
from .words import Word, inverse, rotate


class _Builder:
    def __init__(self):
        self.labels: dict[int, int] = {}
        self.twin: dict[int, int] = {}
        self.nxt: dict[int, int] = {}
        self.face: dict[int, int] = {}
        self.meta: dict[int, tuple] = {}
        self.start: dict[int, int] = {}
        self._darts = 0
        self._faces = 0

    def copy(self) -> "_Builder":
        b = _Builder()
        for name in ("labels", "twin", "nxt", "face", "meta", "start"):
            setattr(b, name, dict(getattr(self, name)))
        b._darts, b._faces = self._darts, self._faces
        return b

    def new_dart(self, label: int) -> int:
        d = self._darts
        self._darts += 1
        self.labels[d] = label
        return d

    def new_face(self, kind: str, relator=None, orientation=None) -> int:
        f = self._faces
        self._faces += 1
        self.meta[f] = (kind, relator, orientation)
        return f

    def orbit(self, d: int) -> list[int]:
        out = [d]
        x = self.nxt[d]
        while x != d:
            out.append(x)
            x = self.nxt[x]
        return out

    def boundary_faces(self) -> list[int]:
        return [f for f, m in self.meta.items() if m[0] == BOUNDARY]

    def cells(self) -> list[int]:
        return [f for f, m in self.meta.items() if m[0] == RELATOR]

    def seed_cell(self, word: Word, relator: int, orientation: int) -> None:
        cell = [self.new_dart(a) for a in word]
        back = [self.new_dart(-a) for a in word]
        fc = self.new_face(RELATOR, relator, orientation)
        fb = self.new_face(BOUNDARY)
        L = len(word)
        for k in range(L):
            self.twin[cell[k]], self.twin[back[k]] = back[k], cell[k]
            self.nxt[cell[k]] = cell[(k + 1) % L]
            self.nxt[back[k]] = back[(k - 1) % L]
            self.face[cell[k]], self.face[back[k]] = fc, fb
        self.start[fc], self.start[fb] = cell[0], back[0]

    def attach(self, boundary_face: int, first: int, m: int, word: Word, relator: int, orientation: int) -> int:
        """Glue a cell reading ``word`` along ``m`` boundary darts starting at ``first``."""
        orbit = self.orbit(first)
        assert m < len(orbit)
        betas = orbit[:m]
        assert all(self.labels[b] == a for b, a in zip(betas, word))
        before = orbit[-1]
        after = orbit[m] if m else orbit[0]
        # with m = 0 the cell is hung at the vertex between ``before`` and ``first``
        fc = self.new_face(RELATOR, relator, orientation)
        fresh = [self.new_dart(a) for a in word[m:]]
        backs = [self.new_dart(-a) for a in word[m:]]
        for d, t in zip(fresh, backs):
            self.twin[d], self.twin[t] = t, d
            self.face[d], self.face[t] = fc, boundary_face
        ring = betas + fresh
        for k, d in enumerate(ring):
            self.nxt[d] = ring[(k + 1) % len(ring)]
            self.face[d] = fc
        path = [before] + backs[::-1] + [after]
        for a, b in zip(path, path[1:]):
            self.nxt[a] = b
        self.start[fc] = ring[0]
        self.start[boundary_face] = before
        return fc

    def hole(self, f: int) -> None:
        self.meta[f] = (BOUNDARY, None, None)

    def pinch(self, a: int, b: int) -> None:
        """Swap the successors of two darts of one boundary face, splitting it in two."""
        fa = self.face[a]
        self.nxt[a], self.nxt[b] = self.nxt[b], self.nxt[a]
        fb = self.new_face(BOUNDARY)
        for d in self.orbit(b):
            self.face[d] = fb
        self.start[fa], self.start[fb] = a, b

    def build(self) -> Diagram:
        faces = []
        for f in sorted(self.meta):
            kind, rel, o = self.meta[f]
            faces.append(Face(tuple(self.orbit(self.start[f])), kind, rel, o))
        diag, _ = relabel(self.labels, self.twin, self.nxt, faces)
        return diag


def _relator_words(P: Presentation):
    for i, r in enumerate(P.relators):
        for o in (1, -1):
            w = r.letters if o == 1 else inverse(r.letters)
            for k in range(len(w)):
                yield i, o, rotate(w, k)


def _attach_options(P: Presentation, labels: list[int]) -> list[tuple[int, int, int, Word]]:
    out = []
    words = list(_relator_words(P))
    for m in range(len(labels)):
        prefix = tuple(labels[:m])
        for i, o, w in words:
            if m < len(w) and w[:m] == prefix:
                out.append((m, i, o, w))
    return out


def one_cell_disk(P: Presentation, relator: int = 0, orientation: int = 1) -> Diagram:
    b = _Builder()
    w = P.relators[relator].letters
    b.seed_cell(w if orientation == 1 else inverse(w), relator, orientation)
    return b.build()


def _seed(P: Presentation, rng: random.Random) -> _Builder:
    b = _Builder()
    i = rng.randrange(len(P.relators))
    o = rng.choice((1, -1))
    w = P.relators[i].letters if o == 1 else inverse(P.relators[i].letters)
    b.seed_cell(rotate(w, rng.randrange(len(w))), i, o)
    return b


def _grow(
    P: Presentation,
    rng: random.Random,
    cells: int,
    vertex_reduced: bool,
    tries: int = 60,
    b: _Builder | None = None,
) -> _Builder:
    b = b or _seed(P, rng)
    for _ in range(tries):
        if len(b.cells()) >= cells:
            break
        (fb,) = b.boundary_faces()
        orbit = b.orbit(b.start[fb])
        first = rng.choice(orbit)
        run = b.orbit(first)
        options = _attach_options(P, [b.labels[d] for d in run])
        if not options:
            continue
        # prefer long gluings, which close up interior vertices
        longest = max(m for m, *_ in options)
        m = rng.choice([m for m, *_ in options] + [longest] * 3)
        m, i, o, w = rng.choice([opt for opt in options if opt[0] == m])
        trial = b.copy()
        trial.attach(fb, first, m, w, i, o)
        if vertex_reduced and not is_vertex_reduced(P, trial.build())[0]:
            continue
        b = trial
    return b


def random_disk(P: Presentation, rng: random.Random, cells: int = 6, vertex_reduced: bool = False) -> Diagram:
    return _grow(P, rng, cells, vertex_reduced).build()


def random_compact_disk(P: Presentation, rng: random.Random, cells: int = 9) -> Diagram:
    """Vertex reduced disk grown by always gluing along as many boundary edges as possible.

    Growth of this kind closes up interior vertices quickly, so the result
    usually has cells that do not touch the boundary at all.
    """
    b = _seed(P, rng)
    while len(b.cells()) < cells:
        (fb,) = b.boundary_faces()
        options = []
        for first in b.orbit(b.start[fb]):
            for m, i, o, w in _attach_options(P, [b.labels[d] for d in b.orbit(first)]):
                if m:
                    options.append((m, first, i, o, w))
        rng.shuffle(options)
        options.sort(key=lambda opt: -opt[0])
        for m, first, i, o, w in options:
            trial = b.copy()
            trial.attach(fb, first, m, w, i, o)
            if is_vertex_reduced(P, trial.build())[0]:
                b = trial
                break
        else:
            break
    return b.build()


def flower(
    P: Presentation,
    darts: tuple[int, ...],
    S: StarGraph | None = None,
    shared: tuple[int, ...] | None = None,
) -> Diagram:
    """Cells arranged around one interior vertex whose link reads the closed walk ``darts``.

    ``shared[t]`` is the length of the edge between cells ``t`` and ``t + 1``
    (all 1 by default); it must not exceed how far the two relators agree.
    """
    return _flower(P, darts, S or build_star_graph(P), shared).build()


def _flower(P: Presentation, darts: tuple[int, ...], S: StarGraph, shared=None) -> _Builder:
    k = len(darts)
    shared = tuple(shared) if shared else (1,) * k
    b = _Builder()
    i, o, w = corner_word(P, S, darts[0])
    b.seed_cell(w, i, o)
    (fb,) = b.boundary_faces()
    first_cell = b.start[b.cells()[0]]
    leaving = b.twin[first_cell]
    # boundary dart entering the centre along the edge shared with the next cell
    entering = b.twin[b.nxt[first_cell]]
    for t in range(1, k):
        i, o, w = corner_word(P, S, darts[t])
        back = shared[t - 1]
        start = entering
        for _ in range(back - 1):
            start = next(y for y in b.orbit(start) if b.nxt[y] == start)
        m = back
        if t == k - 1:
            m += shared[k - 1]
            if b.nxt[entering] != leaving:
                raise ValueError("walk does not close up around the centre")
        word = w[len(w) - back + 1 :] + w[: len(w) - back + 1]
        labels = b.orbit(start)[:m]
        if tuple(b.labels[d] for d in labels) != word[:m]:
            raise ValueError("shared edge longer than the relators agree")
        fc = b.attach(fb, start, m, word, i, o)
        out = b.start[fc]
        for _ in range(back):
            out = b.nxt[out]
        entering = b.twin[out]
    return b


def random_vertex_reduced_disk(
    P: Presentation, rng: random.Random, cells: int = 8, max_link: int = 8
) -> Diagram:
    """A vertex reduced disk, seeded with a flower around an interior vertex when possible."""
    S = build_star_graph(P)
    walks = [
        c.darts
        for c in enumerate_reduced_circuits(S, max_link)
        if len(c) >= 2 and not c.passes_edge_both_ways()
    ]
    rng.shuffle(walks)
    for walk in walks[:20]:
        k = rng.randrange(len(walk))
        walk = walk[k:] + walk[:k]
        if rng.random() < 0.5:
            walk = tuple(d ^ 1 for d in reversed(walk))
        try:
            b = _flower(P, walk, S)
        except (AssertionError, ValueError):
            continue
        if not is_vertex_reduced(P, b.build())[0]:
            continue
        return _grow(P, rng, cells, True, b=b).build()
    return random_disk(P, rng, cells, vertex_reduced=True)


def random_nonreduced_disk(P: Presentation, rng: random.Random, cells: int = 6) -> Diagram:
    """A disk containing at least one cell glued to its own mirror image."""
    b = _grow(P, rng, max(1, cells - 2), False)
    (fb,) = b.boundary_faces()
    orbit = b.orbit(b.start[fb])
    rng.shuffle(orbit)
    for beta in orbit:
        gamma = b.twin[beta]
        kind, i, o = b.meta[b.face[gamma]]
        if kind != RELATOR:
            continue
        word = [b.labels[beta]]
        x = gamma
        for _ in range(len(P.relators[i]) - 1):
            x = next(y for y in b.orbit(x) if b.nxt[y] == x)
            word.append(-b.labels[x])
        b.attach(fb, beta, 1, tuple(word), i, -o)
        break
    extra = _grow_more(P, rng, b, cells)
    return extra.build()


def _grow_more(P: Presentation, rng: random.Random, b: _Builder, cells: int) -> _Builder:
    for _ in range(20):
        if len(b.cells()) >= cells:
            break
        (fb,) = b.boundary_faces()
        first = rng.choice(b.orbit(b.start[fb]))
        options = _attach_options(P, [b.labels[d] for d in b.orbit(first)])
        if options:
            m, i, o, w = rng.choice(options)
            b.attach(fb, first, m, w, i, o)
    return b


def random_annulus(P: Presentation, rng: random.Random, cells: int = 6) -> Diagram:
    b = _grow(P, rng, cells, False)
    cell_faces = b.cells()
    (fb,) = b.boundary_faces()
    orbit = b.orbit(b.start[fb])
    # pinch two boundary corners together, or punch out a cell
    if len(cell_faces) < 2 or rng.random() >= 0.5:
        for _ in range(20):
            if len(orbit) < 2:
                break
            a, c = rng.sample(orbit, 2)
            trial = b.copy()
            trial.pinch(a, c)
            M = trial.build()
            # corners already sharing a cut vertex would split it instead
            if validate_diagram(P, M).ok:
                return M
    b.hole(rng.choice(cell_faces))
    return b.build()


def random_sphere(P: Presentation, rng: random.Random, cells: int = 12) -> Diagram:
    spheres = double(random_disk(P, rng, max(1, cells // 2)))
    return max(spheres, key=lambda D: D.num_cells)


def random_diagram(P: Presentation, rng: random.Random, tau: int, cells: int = 12) -> Diagram:
    if tau == 0:
        return random_sphere(P, rng, cells)
    if tau == 1:
        return random_disk(P, rng, cells)
    if tau == 2:
        return random_annulus(P, rng, cells)
    raise ValueError("tau must be 0, 1 or 2")


def commutator_ring(P: Presentation, relator: int = 0) -> Diagram:
    """Two copies of a cell joined at two opposite corners, enclosing a hole."""
    b = _Builder()
    w = P.relators[relator].letters
    b.seed_cell(w, relator, 1)
    (fb,) = b.boundary_faces()
    first = b.start[fb]
    b.attach(fb, first, 0, w, relator, 1)
    orbit = b.orbit(first)
    # ``orbit`` now runs around both cells; join the corners opposite the wedge point
    L = len(w)
    half = L // 2
    a = orbit[half - 1]
    c = orbit[L + half - 1]
    b.pinch(a, c)
    return b.build()
