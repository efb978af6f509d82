"""Free-group words over a numbered alphabet.

A letter is a nonzero int: ``+i`` stands for the generator ``x_i`` and ``-i``
for its inverse (generators are numbered from 1).  A word is a tuple of
letters.  Cyclic words are kept in a canonical rotation so that equality of
cyclic words is plain tuple equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Letter = int
Word = tuple[int, ...]


def letter_key(letter: Letter) -> int:
    """Total order on letters: by generator index, then ``+`` before ``-``."""
    return 2 * abs(letter) + (0 if letter > 0 else 1)


def inverse(w: Sequence[Letter]) -> Word:
    return tuple(-a for a in reversed(w))


def free_reduce(w: Iterable[Letter]) -> Word:
    out: list[int] = []
    for a in w:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def is_freely_reduced(w: Sequence[Letter]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def is_cyclically_reduced(w: Sequence[Letter]) -> bool:
    if not is_freely_reduced(w):
        return False
    return len(w) < 2 or w[0] != -w[-1]


def rotate(w: Sequence[Letter], k: int) -> Word:
    if not w:
        return ()
    k %= len(w)
    return tuple(w[k:]) + tuple(w[:k])


def canonical_rotation(w: Sequence[Letter]) -> tuple[Word, int]:
    """Least rotation of ``w`` under :func:`letter_key` and its offset."""
    if not w:
        return (), 0
    keys = [letter_key(a) for a in w]
    n = len(w)
    best = 0
    for k in range(1, n):
        for t in range(n):
            a, b = keys[(k + t) % n], keys[(best + t) % n]
            if a != b:
                if a < b:
                    best = k
                break
    return rotate(w, best), best


@dataclass(frozen=True)
class CyclicWord:
    """A cyclically reduced word stored in canonical rotation."""

    letters: Word

    def __init__(self, letters: Iterable[Letter]):
        letters = tuple(letters)
        if not is_cyclically_reduced(letters):
            raise ValueError(f"word {letters} is not cyclically reduced")
        object.__setattr__(self, "letters", canonical_rotation(letters)[0])

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def inverse(self) -> "CyclicWord":
        return CyclicWord(inverse(self.letters))

    def rotations(self) -> list[Word]:
        return [rotate(self.letters, k) for k in range(len(self.letters))]


def cyclic_reduce(w: Sequence[Letter]) -> tuple[Word, CyclicWord]:
    """Split ``w`` as ``conjugator * core * conjugator^-1`` in the free group.

    The core is returned as a :class:`CyclicWord`; since cyclic words are
    stored canonically, the conjugator absorbs the rotation, so the identity
    holds for the stored letters exactly.
    """
    r = free_reduce(w)
    i, j = 0, len(r)
    while j - i >= 2 and r[i] == -r[j - 1]:
        i += 1
        j -= 1
    prefix, core = r[:i], r[i:j]
    canon, k = canonical_rotation(core)
    # core = u v with canon = v u, so core = u canon u^-1
    conjugator = free_reduce(prefix + core[:k])
    return conjugator, CyclicWord(canon)


def root_decompose(c: CyclicWord | Sequence[Letter]) -> tuple[CyclicWord, int]:
    """Return ``(root, exponent)`` with ``c = root**exponent``, root primitive."""
    letters = c.letters if isinstance(c, CyclicWord) else tuple(c)
    n = len(letters)
    if n == 0:
        raise ValueError("cannot take the root of the empty word")
    for p in range(1, n + 1):
        if n % p == 0 and letters == rotate(letters, p):
            return CyclicWord(letters[:p]), n // p
    raise AssertionError("unreachable")


def exponent_sums(w: Iterable[Letter], n: int) -> tuple[int, ...]:
    sums = [0] * n
    for a in w:
        sums[abs(a) - 1] += 1 if a > 0 else -1
    return tuple(sums)


def format_word(w: Sequence[Letter], names: Sequence[str]) -> str:
    """Render a word as ``z^2*y^-1``; the empty word renders as ``1``."""
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        name = names[abs(w[i]) - 1]
        e = (j - i) * (1 if w[i] > 0 else -1)
        parts.append(name if e == 1 else f"{name}^{e}")
        i = j
    return "*".join(parts)
