"""Finite presentations: parsing, serialization and well-formedness checks."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

from .words import (
    CyclicWord,
    Word,
    cyclic_reduce,
    format_word,
    free_reduce,
    inverse,
    is_cyclically_reduced,
    root_decompose,
)


class PresentationError(ValueError):
    """Raised for unparsable or degenerate presentation text."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[CyclicWord, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(self.relators))

    @property
    def n(self) -> int:
        return len(self.generators)

    @cached_property
    def roots(self) -> tuple[tuple[CyclicWord, int], ...]:
        return tuple(root_decompose(r) for r in self.relators)

    @cached_property
    def max_relator_length(self) -> int:
        return max((len(r) for r in self.relators), default=0)

    def format(self, w) -> str:
        return format_word(w, self.generators)

    def __str__(self) -> str:
        rels = ", ".join(self.format(r.letters) for r in self.relators)
        return f"<{','.join(self.generators)} | {rels}>"

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "relators": [
                [{"gen": abs(a), "sign": 1 if a > 0 else -1} for a in r] for r in self.relators
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Presentation":
        gens = tuple(data["generators"])
        rels = []
        for rel in data["relators"]:
            w = []
            for letter in rel:
                g = letter["gen"]
                if isinstance(g, str):
                    g = gens.index(g) + 1
                if not 1 <= g <= len(gens):
                    raise PresentationError(f"generator index {g} out of range")
                w.append(g if letter["sign"] > 0 else -g)
            rels.append(_normalize_relator(w))
        return cls(gens, tuple(rels))


def _normalize_relator(w, position: int | None = None) -> CyclicWord:
    _, core = cyclic_reduce(w)
    if not core.letters:
        raise PresentationError("relator is trivial after reduction", position)
    return core


_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>-?\d+)|(?P<sym>[<>|,*^=]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise PresentationError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, generators: tuple[str, ...] | None = None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.generators = generators

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str, value: str | None = None):
        tok = self.tokens[self.i]
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            got = tok[1] or "end of input"
            raise PresentationError(f"expected {want!r}, got {got!r}", tok[2])
        self.i += 1
        return tok

    def at(self, kind: str, value: str | None = None) -> bool:
        tok = self.tokens[self.i]
        return tok[0] == kind and (value is None or tok[1] == value)

    def word(self) -> Word:
        # "1" denotes the empty word
        if self.at("int", "1"):
            self.take("int")
            return ()
        letters = list(self.term())
        while self.at("sym", "*"):
            self.take("sym")
            letters.extend(self.term())
        return tuple(letters)

    def term(self) -> Word:
        _, name, pos = self.take("name")
        if name not in self.generators:
            raise PresentationError(f"unknown generator {name!r}", pos)
        g = self.generators.index(name) + 1
        e = 1
        if self.at("sym", "^"):
            self.take("sym")
            e = int(self.take("int")[1])
        return (g,) * e if e >= 0 else (-g,) * (-e)

    def entry(self) -> tuple[Word, int]:
        pos = self.peek()[2]
        lhs = self.word()
        if self.at("sym", "="):
            self.take("sym")
            rhs = self.word()
            return free_reduce(lhs + inverse(rhs)), pos
        return free_reduce(lhs), pos

    def presentation(self) -> Presentation:
        self.take("sym", "<")
        gens: list[str] = []
        if not self.at("sym", "|"):
            while True:
                _, name, pos = self.take("name")
                if name in gens:
                    raise PresentationError(f"duplicate generator {name!r}", pos)
                gens.append(name)
                if not self.at("sym", ","):
                    break
                self.take("sym")
        self.generators = tuple(gens)
        self.take("sym", "|")
        rels = []
        if not self.at("sym", ">"):
            while True:
                w, pos = self.entry()
                rels.append(_normalize_relator(w, pos))
                if not self.at("sym", ","):
                    break
                self.take("sym")
        self.take("sym", ">")
        self.take("end")
        return Presentation(self.generators, tuple(rels))


def parse_presentation(text: str) -> Presentation:
    """Parse ``<x,y | w1, u = v, ...>`` into a normalized presentation."""
    return _Parser(text).presentation()


def parse_word(text: str, generators: tuple[str, ...]) -> Word:
    """Parse a single word (``1`` or empty text for the identity), freely reduced."""
    if not text.strip():
        return ()
    p = _Parser(text, tuple(generators))
    w = p.word()
    p.take("end")
    return free_reduce(w)


@dataclass(frozen=True)
class Finding:
    kind: str
    message: str
    relators: tuple[int, ...] = ()
    generator: int | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "message": self.message, "relators": list(self.relators)}
        if self.generator is not None:
            out["generator"] = self.generator
        return out


# findings that make a presentation unusable; everything else is advisory
WELL_FORMEDNESS = {"empty_relator", "not_cyclically_reduced", "duplicate_relator", "bad_generator"}


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Finding, ...] = ()
    single_occurrence: tuple[int, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [f.to_json() for f in self.violations],
            "single_occurrence_generators": list(self.single_occurrence),
        }


def validate(P: Presentation) -> ValidationReport:
    findings: list[Finding] = []
    n = P.n
    for i, r in enumerate(P.relators):
        w = r.letters
        if not w:
            findings.append(Finding("empty_relator", f"relator {i} is empty", (i,)))
            continue
        if any(not 1 <= abs(a) <= n for a in w):
            findings.append(Finding("bad_generator", f"relator {i} uses an unknown generator", (i,)))
        if not is_cyclically_reduced(w):
            findings.append(
                Finding("not_cyclically_reduced", f"relator {i} is not cyclically reduced", (i,))
            )
    forms = []
    for r in P.relators:
        try:
            forms.append((r, r.inverse()))
        except ValueError:
            forms.append((r, None))
    for j in range(len(P.relators)):
        for i in range(j):
            rj, rj_inv = forms[j]
            if P.relators[i] == rj or (rj_inv is not None and P.relators[i] == rj_inv):
                what = "a cyclic permutation" if P.relators[i] == rj else "a cyclic permutation of the inverse"
                findings.append(
                    Finding("duplicate_relator", f"relator {j} is {what} of relator {i}", (i, j))
                )
    counts: Counter[int] = Counter()
    for root, _ in _safe_roots(P):
        counts.update(abs(a) for a in root)
    single = tuple(g for g in range(1, n + 1) if counts[g] < 2)
    for g in single:
        findings.append(
            Finding(
                "single_occurrence",
                f"generator {P.generators[g - 1]} occurs {counts[g]} time(s) in the roots",
                generator=g,
            )
        )
    ok = not any(f.kind in WELL_FORMEDNESS for f in findings)
    return ValidationReport(ok, tuple(findings), single)


def _safe_roots(P: Presentation):
    for r in P.relators:
        if r.letters:
            yield root_decompose(r)


def require_valid(P: Presentation) -> None:
    report = validate(P)
    if not report.ok:
        bad = [f.message for f in report.violations if f.kind in WELL_FORMEDNESS]
        raise PresentationError("invalid presentation: " + "; ".join(bad))
