"""Whitehead graphs and star graphs of presentations, and their reduced circuits.

Vertices are signed generator indices: ``+i`` is the vertex ``+x_i`` and ``-i``
is ``-x_i``.  Edge ``e`` has two darts, ``2e`` (from ``edge.u`` to ``edge.v``)
and ``2e + 1`` (backwards).
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .presentation import Presentation

DEFAULT_MAX_CIRCUIT_LENGTH = 8


def arrive(letter: int) -> int:
    return -letter


def depart(letter: int) -> int:
    return letter


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    root: int | None = None  # provenance: index of the relator whose root has this corner
    pos: int | None = None  # corner between root letters pos and pos + 1


@dataclass(frozen=True)
class StarGraph:
    n: int
    edges: tuple[Edge, ...]
    names: tuple[str, ...] | None = None

    @property
    def vertices(self) -> list[int]:
        return [s * i for i in range(1, self.n + 1) for s in (1, -1)]

    def tail(self, dart: int) -> int:
        e = self.edges[dart >> 1]
        return e.v if dart & 1 else e.u

    def head(self, dart: int) -> int:
        e = self.edges[dart >> 1]
        return e.u if dart & 1 else e.v

    @cached_property
    def out_darts(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {v: [] for v in self.vertices}
        for e in range(len(self.edges)):
            for d in (2 * e, 2 * e + 1):
                out.setdefault(self.tail(d), []).append(d)
        return {v: tuple(ds) for v, ds in out.items()}

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        """Map ``(root, pos)`` provenance to edge id."""
        return {(e.root, e.pos): k for k, e in enumerate(self.edges) if e.root is not None}

    def vertex_name(self, v: int) -> str:
        name = self.names[abs(v) - 1] if self.names else f"x{abs(v)}"
        return ("+" if v > 0 else "-") + name

    def to_dot(self) -> str:
        lines = ["graph stargraph {"]
        for v in self.vertices:
            lines.append(f'  "{self.vertex_name(v)}";')
        for k, e in enumerate(self.edges):
            label = f"e{k}" if e.root is None else f"e{k}: R{e.root}[{e.pos}]"
            lines.append(f'  "{self.vertex_name(e.u)}" -- "{self.vertex_name(e.v)}" [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "vertices": [self.vertex_name(v) for v in self.vertices],
            "edges": [
                {
                    "id": k,
                    "ends": [self.vertex_name(e.u), self.vertex_name(e.v)],
                    "root": e.root,
                    "position": e.pos,
                }
                for k, e in enumerate(self.edges)
            ],
        }


def _corner_graph(P: Presentation, words: Sequence[Sequence[int]]) -> StarGraph:
    edges = []
    for i, s in enumerate(words):
        m = len(s)
        for j in range(m):
            edges.append(Edge(arrive(s[j]), depart(s[(j + 1) % m]), i, j))
    return StarGraph(P.n, tuple(edges), P.generators)


def build_star_graph(P: Presentation) -> StarGraph:
    return _corner_graph(P, [root.letters for root, _ in P.roots])


def build_whitehead_graph(P: Presentation) -> StarGraph:
    return _corner_graph(P, [r.letters for r in P.relators])


def corner_word(P: Presentation, S: StarGraph, dart: int) -> tuple[int, int, tuple[int, ...]]:
    """Relator index, orientation and the rotation of it whose first corner traverses ``dart``.

    The returned word starts with the letter entering the corner and
    continues with the letter leaving it.
    """
    e = S.edges[dart >> 1]
    i, pos = e.root, e.pos
    R = P.relators[i].letters
    L = len(R)
    if dart & 1 == 0:
        return i, 1, R[pos:] + R[:pos]
    inv = tuple(-a for a in reversed(R))
    k = (L - 2 - pos) % L
    return i, -1, inv[k:] + inv[:k]


def reverse_dart(d: int) -> int:
    return d ^ 1


@dataclass(frozen=True)
class Circuit:
    """A reduced closed walk, stored as its canonical dart sequence."""

    darts: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.darts)

    @property
    def edges(self) -> tuple[int, ...]:
        return tuple(d >> 1 for d in self.darts)

    def vertices(self, S: StarGraph) -> tuple[int, ...]:
        return tuple(S.tail(d) for d in self.darts)

    def passes_edge_both_ways(self) -> bool:
        ds = set(self.darts)
        return any(reverse_dart(d) in ds for d in ds)

    def to_json(self, S: StarGraph) -> dict:
        return {
            "length": len(self),
            "vertices": [S.vertex_name(v) for v in self.vertices(S)],
            "edges": list(self.edges),
            "darts": list(self.darts),
        }


def canonical_circuit(darts: Sequence[int]) -> tuple[int, ...]:
    """Least representative under rotation and reflection."""
    seq = tuple(darts)
    rev = tuple(reverse_dart(d) for d in reversed(seq))
    n = len(seq)
    return min(min(s[k:] + s[:k] for k in range(n)) for s in (seq, rev))


def is_reduced_circuit(S: StarGraph, darts: Sequence[int]) -> bool:
    n = len(darts)
    if n == 0:
        return False
    for t in range(n):
        a, b = darts[t], darts[(t + 1) % n]
        if S.head(a) != S.tail(b) or b == reverse_dart(a):
            return False
    return True


class CircuitCapExceeded(ValueError):
    pass


def enumerate_reduced_circuits(
    S: StarGraph, max_len: int, cap: int = DEFAULT_MAX_CIRCUIT_LENGTH
) -> list[Circuit]:
    """All reduced circuits of length ``<= max_len`` up to rotation and reflection.

    Sorted by length, then by canonical dart sequence.
    """
    if max_len < 1 or max_len > cap:
        raise CircuitCapExceeded(f"max_len must lie in 1..{cap}, got {max_len}")
    found: set[tuple[int, ...]] = set()
    out_darts = S.out_darts
    for e0 in range(len(S.edges)):
        # every class has a representative starting with dart 2*e0 of its least edge
        d0 = 2 * e0
        start = S.tail(d0)
        path = [d0]

        def extend():
            last = path[-1]
            if S.head(last) == start and d0 != reverse_dart(last):
                found.add(canonical_circuit(path))
            if len(path) == max_len:
                return
            for d in out_darts[S.head(last)]:
                if d >> 1 < e0 or d == reverse_dart(last):
                    continue
                path.append(d)
                extend()
                path.pop()

        extend()
    circuits = [Circuit(c) for c in found]
    circuits.sort(key=lambda c: (len(c), c.darts))
    for c in circuits:
        assert is_reduced_circuit(S, c.darts)
    return circuits


def circuit_counts(circuits: Sequence[Circuit]) -> Counter:
    return Counter(len(c) for c in circuits)


def min_circuit_length_through(S: StarGraph, edge: int) -> float:
    """Length of a shortest reduced circuit using ``edge``; ``inf`` if none."""
    best = float("inf")
    for d in (2 * edge, 2 * edge + 1):
        # shortest non-backtracking walk d, d1, ..., dk that closes up onto d
        dist = {d: 1}
        queue = deque([d])
        while queue:
            a = queue.popleft()
            if dist[a] >= best:
                break
            if S.head(a) == S.tail(d) and a != reverse_dart(d):
                best = min(best, dist[a])
                break
            for b in S.out_darts[S.head(a)]:
                if b != reverse_dart(a) and b not in dist:
                    dist[b] = dist[a] + 1
                    queue.append(b)
    return best
