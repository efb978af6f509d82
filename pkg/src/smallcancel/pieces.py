"""Pieces of a presentation and decompositions of relators into pieces.

A word is a piece when it is a common prefix of two distinct members of the
symmetrized relator set (all cyclic permutations of every relator and its
inverse).  Because the symmetrized set is a *set*, rotations of a proper
power that differ by a multiple of the period coincide and give only one
occurrence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from .presentation import Presentation
from .words import Word, inverse, rotate


def symmetrized_set(P: Presentation) -> frozenset[Word]:
    out = set()
    for r in P.relators:
        for w in (r.letters, inverse(r.letters)):
            out.update(rotate(w, k) for k in range(len(w)))
    return frozenset(out)


def _common_prefix(a: Word, b: Word) -> int:
    k = 0
    for x, y in zip(a, b):
        if x != y:
            break
        k += 1
    return k


@dataclass(frozen=True)
class Decomposition:
    relator: int
    breakpoints: tuple[int, ...]
    length: int

    @property
    def degree(self) -> int:
        return len(self.breakpoints)

    def factors(self, relator_word: Word) -> list[Word]:
        out = []
        bs = self.breakpoints
        for k, b in enumerate(bs):
            e = bs[(k + 1) % len(bs)]
            span = (e - b) % self.length or self.length
            out.append(tuple(relator_word[(b + t) % self.length] for t in range(span)))
        return out

    def to_json(self, P: Presentation | None = None) -> dict:
        out = {"relator": self.relator, "breakpoints": list(self.breakpoints)}
        if P is not None:
            out["factors"] = [P.format(f) for f in self.factors(P.relators[self.relator].letters)]
        return out


@dataclass(frozen=True)
class PieceTable:
    presentation: Presentation
    pieces: frozenset[Word]

    @cached_property
    def max_length(self) -> int:
        return max((len(w) for w in self.pieces), default=0)

    def is_piece(self, w: Word) -> bool:
        return w in self.pieces

    @cached_property
    def segment_table(self) -> tuple[tuple[int, ...], ...]:
        """``segment_table[i][j]``: longest piece starting at position ``j`` of relator ``i``."""
        rows = []
        for r in self.presentation.relators:
            w = r.letters
            n = len(w)
            row = []
            for j in range(n):
                k = 0
                while k < n and tuple(w[(j + t) % n] for t in range(k + 1)) in self.pieces:
                    k += 1
                row.append(k)
            rows.append(tuple(row))
        return tuple(rows)

    def is_piece_segment(self, i: int, start: int, length: int) -> bool:
        # pieces are closed under subwords, so prefixes of the longest one suffice
        return 1 <= length <= self.segment_table[i][start % len(self.segment_table[i])]

    def to_json(self) -> dict:
        P = self.presentation
        return {
            "max_length": self.max_length,
            "pieces": sorted((P.format(w) for w in self.pieces), key=lambda s: (len(s), s)),
            "relators": [
                {
                    "relator": P.format(r.letters),
                    "longest_piece_at": list(self.segment_table[i]),
                    "min_decomposition": _json_num(min_piece_decomposition(self, i)),
                }
                for i, r in enumerate(P.relators)
            ],
        }


def _json_num(x):
    return None if x == math.inf else x


def compute_pieces(P: Presentation) -> PieceTable:
    words = sorted(symmetrized_set(P))
    pieces: set[Word] = set()
    # after sorting, the longest common prefix of any pair is attained by neighbours
    for a, b in zip(words, words[1:]):
        k = _common_prefix(a, b)
        for length in range(1, k + 1):
            pieces.add(a[:length])
    return PieceTable(P, frozenset(pieces))


def min_piece_decomposition(table: PieceTable, i: int) -> float:
    """Least number of pieces the cyclic relator ``i`` splits into (``inf`` if none)."""
    row = table.segment_table[i]
    n = len(row)
    best = math.inf
    for s in range(n):
        # shortest cover of the linear word starting at s by pieces
        dp = [math.inf] * (n + 1)
        dp[0] = 0
        for k in range(n):
            if dp[k] == math.inf:
                continue
            reach = min(row[(s + k) % n], n - k)
            for length in range(1, reach + 1):
                if dp[k] + 1 < dp[k + length]:
                    dp[k + length] = dp[k] + 1
        best = min(best, dp[n])
    return best


def min_cut_decomposition(pieces: frozenset[Word], word: Word, first: int, last: int) -> float:
    """Fewest pieces covering the cyclic ``word`` with a cut before ``word[0]``.

    The piece starting at the cut has length exactly ``first`` and the piece
    ending there exactly ``last``.
    """
    n = len(word)
    if first == n or last == n:
        return 1 if first == last == n and word in pieces else math.inf
    if first + last > n or word[:first] not in pieces or word[n - last :] not in pieces:
        return math.inf
    if first + last == n:
        return 2
    # cover the middle stretch
    mid = word[first : n - last]
    m = len(mid)
    dp = [math.inf] * (m + 1)
    dp[0] = 0
    for k in range(m):
        if dp[k] == math.inf:
            continue
        for length in range(1, m - k + 1):
            if mid[k : k + length] not in pieces:
                break
            dp[k + length] = min(dp[k + length], dp[k] + 1)
    return dp[m] + 2


def enumerate_decompositions(table: PieceTable, i: int, d: int) -> list[Decomposition]:
    """Every way to cut relator ``i`` into exactly ``d`` pieces.

    Cut sets that differ by a rotation through a multiple of the root's length
    are reported once, by their least representative.
    """
    P = table.presentation
    n = len(P.relators[i])
    period = len(P.roots[i][0])
    row = table.segment_table[i]
    if d < 1 or d > n:
        return []
    found: set[tuple[int, ...]] = set()
    for b0 in range(period):
        cuts = [b0]

        def extend(pos: int, used: int):
            remaining = (b0 - pos) % n or n
            if used == d:
                return
            if used == d - 1:
                if remaining <= row[pos % n]:
                    found.add(_canonical_cuts(cuts, n, period))
                return
            for length in range(1, min(row[pos % n], remaining - 1) + 1):
                nxt = (pos + length) % n
                cuts.append(nxt)
                extend(nxt, used + 1)
                cuts.pop()

        extend(b0, 0)
    return [Decomposition(i, c, n) for c in sorted(found)]


def _canonical_cuts(cuts, n: int, period: int) -> tuple[int, ...]:
    return min(tuple(sorted((c + k) % n for c in cuts)) for k in range(0, n, period))
