"""Word and conjugacy problems with explicit budgets and replayable witnesses.

A witness is a list of insertion steps.  Step ``(position, relator,
rotation, orientation)`` inserts the cyclic permutation ``rotation`` of
``R_relator ** orientation`` at ``position`` of the current word and freely
reduces.  Replaying all steps from the input must end at the empty word,
which exhibits the input as a product of conjugates of relators.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import mpmath

from .conditions import Condition, certify
from .pieces import compute_pieces
from .presentation import Presentation
from .words import Word, exponent_sums, free_reduce, inverse, is_freely_reduced, letter_key, rotate

# angle excess of the best V* column (3, 7, 43): 1/3 + 5/7 + 41/43 = 2 + 1/903
V_EPSILON_INVERSE = 903

TRIVIAL = "Trivial"
NON_TRIVIAL = "NonTrivial"
CONJUGATE = "Conjugate"
NOT_CONJUGATE = "NotConjugate"
INCONCLUSIVE = "Inconclusive"

EXIT_CODES = {TRIVIAL: 0, CONJUGATE: 0, NON_TRIVIAL: 1, NOT_CONJUGATE: 1, INCONCLUSIVE: 2}


class NotCertifiedError(ValueError):
    pass


class WitnessError(ValueError):
    pass


@dataclass(frozen=True)
class Step:
    position: int
    relator: int
    rotation: int
    orientation: int

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "Step":
        return cls(int(data["position"]), int(data["relator"]), int(data["rotation"]), int(data["orientation"]))


def step_word(P: Presentation, step: Step) -> Word:
    if not 0 <= step.relator < len(P.relators):
        raise WitnessError(f"relator index {step.relator} out of range")
    R = P.relators[step.relator].letters
    if not 0 <= step.rotation < len(R):
        raise WitnessError(f"rotation {step.rotation} out of range")
    if step.orientation not in (1, -1):
        raise WitnessError(f"orientation must be +1 or -1, got {step.orientation}")
    w = R if step.orientation == 1 else inverse(R)
    return rotate(w, step.rotation)


def apply_step(P: Presentation, w: Word, step: Step) -> Word:
    if not 0 <= step.position <= len(w):
        raise WitnessError(f"position {step.position} outside a word of length {len(w)}")
    return free_reduce(w[: step.position] + step_word(P, step) + w[step.position :])


def verify_witness(P: Presentation, start: Word, witness) -> bool:
    """Replay ``witness`` from ``start``; malformed relator data raises :class:`WitnessError`."""
    w = free_reduce(start)
    for step in witness:
        if isinstance(step, dict):
            step = Step.from_json(step)
        if not 0 <= step.position <= len(w):
            return False
        w = apply_step(P, w, step)
    return w == ()


# -- budgets ----------------------------------------------------------------


def _require(P: Presentation, cond: Condition) -> None:
    if not certify(P, cond).certified:
        raise NotCertifiedError(f"presentation is not certified {cond.value}")


def generators_occur_twice(P: Presentation) -> bool:
    counts = [0] * (P.n + 1)
    for root, _ in P.roots:
        for a in root.letters:
            counts[abs(a)] += 1
    return all(c >= 2 for c in counts[1:])


def _floor_over_sqrt3_pi(numerator: int) -> int:
    with mpmath.workdps(60):
        return int(mpmath.floor(mpmath.mpf(numerator) / (mpmath.sqrt(3) * mpmath.pi)))


def area_bound(P: Presentation, cond: Condition | str, l: int, chi: int = 1, check: bool = True) -> int:
    """Most cells a minimal (vertex) reduced diagram with boundary length ``l`` can need."""
    cond = Condition.parse(cond)
    if l < 0:
        raise ValueError("boundary length must be non-negative")
    if check:
        _require(P, cond)
    if cond is Condition.W and not generators_occur_twice(P):
        raise NotCertifiedError("the quadratic bound for W needs every generator twice in the roots")
    if l == 0:
        return 0
    if cond is Condition.WSTAR:
        return _floor_over_sqrt3_pi(l * l)
    if cond is Condition.W:
        return _floor_over_sqrt3_pi(2 * 20**2 * l * l)
    if cond is Condition.VSTAR:
        return max(0, (4 * V_EPSILON_INVERSE - 1) * l - 2 * chi)
    return 3 * V_EPSILON_INVERSE * l


def count_words(n: int, max_len: int) -> int:
    """Number of words of length at most ``max_len`` over ``n`` generators and their inverses."""
    return sum((2 * n) ** i for i in range(max_len + 1))


def conjugator_search_length(P: Presentation, cond: Condition | str, len_u: int, len_v: int) -> int:
    cond = Condition.parse(cond)
    longest = max(len_u, len_v)
    if cond in (Condition.WSTAR, Condition.VSTAR):
        return 3 * compute_pieces(P).max_length * longest
    r = P.max_relator_length
    return 31 * r * (len_u + len_v)


def conj_length_bound(P: Presentation, cond: Condition | str, len_u: int, len_v: int, check: bool = True) -> int:
    """Length up to which a conjugator is guaranteed to exist, if any does."""
    cond = Condition.parse(cond)
    if check:
        _require(P, cond)
    if cond in (Condition.W, Condition.V) and not generators_occur_twice(P):
        raise NotCertifiedError("the conjugator bound for W needs every generator twice in the roots")
    L = conjugator_search_length(P, cond, len_u, len_v)
    return count_words(P.n, L) + 2 * max(len_u, len_v)


# -- abelianization ---------------------------------------------------------


def _echelon(rows: list[list[int]]) -> list[list[int]]:
    """Integer row echelon form spanning the same lattice."""
    rows = [list(r) for r in rows if any(r)]
    out = []
    col = 0
    width = len(rows[0]) if rows else 0
    while rows and col < width:
        live = [r for r in rows if r[col] != 0]
        if not live:
            col += 1
            continue
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            pivot = live[0]
            for r in live[1:]:
                q = r[col] // pivot[col]
                for j in range(width):
                    r[j] -= q * pivot[j]
            live = [r for r in live if r[col] != 0]
        pivot = live[0]
        out.append(pivot)
        rows = [r for r in rows if r is not pivot and any(r)]
        col += 1
    return out


class Abelianization:
    """The quotient of ``Z^n`` by the exponent-sum vectors of the relators."""

    def __init__(self, P: Presentation):
        self.n = P.n
        self.basis = _echelon([list(exponent_sums(r.letters, P.n)) for r in P.relators])

    def is_zero(self, w: Word) -> bool:
        v = list(exponent_sums(w, self.n))
        for row in self.basis:
            col = next(j for j, x in enumerate(row) if x)
            if v[col] % row[col]:
                return False
            q = v[col] // row[col]
            v = [a - q * b for a, b in zip(v, row)]
        return not any(v)


# -- verdicts ---------------------------------------------------------------


@dataclass
class Verdict:
    kind: str
    witness: list[Step] | None = None
    conjugator: Word | None = None
    reason: str = ""
    stats: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.kind]

    def to_json(self, P: Presentation | None = None) -> dict:
        out = {"verdict": self.kind, "reason": self.reason, "stats": self.stats}
        if self.witness is not None:
            out["witness"] = [s.to_json() for s in self.witness]
        if self.conjugator is not None:
            out["conjugator"] = P.format(self.conjugator) if P else list(self.conjugator)
        return out


@dataclass(frozen=True)
class Budget:
    max_area: int
    max_intermediate_length: int
    conj_max_length: int | None = None
    max_states: int | None = None
    theoretical_area: int | None = None
    theoretical_length: int | None = None

    def to_json(self) -> dict:
        out = asdict(self)
        # the theoretical conjugator length can have thousands of digits
        if self.conj_max_length is not None and self.conj_max_length > 10**18:
            out["conj_max_length"] = f"~10^{len(str(self.conj_max_length)) - 1}"
        return out


def word_budget(
    P: Presentation,
    cond: Condition,
    w: Word,
    max_area: int | None = None,
    max_len: int | None = None,
    max_states: int | None = None,
) -> Budget:
    area = area_bound(P, cond, len(w), check=False)
    length = len(w) + area * P.max_relator_length
    return Budget(
        area if max_area is None else min(area, max_area),
        length if max_len is None else min(length, max_len),
        None,
        max_states,
        area,
        length,
    )


def _insertions(P: Presentation) -> list[tuple[int, int, int, Word]]:
    out = []
    for i, r in enumerate(P.relators):
        for o in (1, -1):
            base = r.letters if o == 1 else inverse(r.letters)
            for k in range(len(base)):
                out.append((i, o, k, rotate(base, k)))
    return out


def _search(P: Presentation, w: Word, budget: Budget) -> tuple[list[Step] | None, dict]:
    """Breadth-first search for a shortest witness; also reports whether caps cut it short."""
    stats = {"states": 1, "expanded": 0, "pruned_by_length": 0, "frontier_left": 0, "state_cap_hit": False}
    if not w:
        return [], stats
    moves = _insertions(P)
    by_first: dict[int, list] = {}
    by_last: dict[int, list] = {}
    for m in moves:
        by_first.setdefault(m[3][0], []).append(m)
        by_last.setdefault(m[3][-1], []).append(m)
    parent: dict[Word, tuple[Word, Step] | None] = {w: None}
    frontier = [w]
    for _ in range(budget.max_area):
        nxt = []
        for u in frontier:
            stats["expanded"] += 1
            for p in range(len(u) + 1):
                # only insertions that cancel against a neighbouring letter
                cands = []
                if p > 0:
                    cands += by_first.get(-u[p - 1], [])
                if p < len(u):
                    cands += [m for m in by_last.get(-u[p], []) if p == 0 or m[3][0] != -u[p - 1]]
                for i, o, k, c in sorted(cands, key=lambda m: (m[0], -m[1], m[2])):
                    v = free_reduce(u[:p] + c + u[p:])
                    if v in parent:
                        continue
                    if len(v) > budget.max_intermediate_length:
                        stats["pruned_by_length"] += 1
                        continue
                    parent[v] = (u, Step(p, i, k, o))
                    stats["states"] += 1
                    if not v:
                        return _unwind(parent, v), stats
                    nxt.append(v)
                    if budget.max_states is not None and stats["states"] >= budget.max_states:
                        stats["state_cap_hit"] = True
                        return None, stats
        frontier = nxt
        if not frontier:
            break
    stats["frontier_left"] = len(frontier)
    return None, stats


def _unwind(parent, v: Word) -> list[Step]:
    steps = []
    while parent[v] is not None:
        u, step = parent[v]
        steps.append(step)
        v = u
    return steps[::-1]


def solve_word(
    P: Presentation,
    w: Word,
    cond: Condition | str = Condition.WSTAR,
    max_area: int | None = None,
    max_len: int | None = None,
    max_states: int | None = None,
    use_abelianization: bool = True,
) -> Verdict:
    cond = Condition.parse(cond)
    _require(P, cond)
    w = tuple(w)
    if not is_freely_reduced(w):
        raise ValueError("word must be freely reduced")
    budget = word_budget(P, cond, w, max_area, max_len, max_states)
    if use_abelianization and not Abelianization(P).is_zero(w):
        return Verdict(
            NON_TRIVIAL,
            reason="nonzero image in the abelianization",
            stats={"budget": budget.to_json(), "states": 0},
        )
    steps, stats = _search(P, w, budget)
    stats["budget"] = budget.to_json()
    if steps is not None:
        assert verify_witness(P, w, steps)
        return Verdict(TRIVIAL, steps, stats=stats)
    if _cut_short(stats, budget):
        return Verdict(INCONCLUSIVE, reason="search stopped at a user cap", stats=stats)
    return Verdict(NON_TRIVIAL, reason="area budget exhausted without reaching the empty word", stats=stats)


def _cut_short(stats: dict, budget: Budget) -> bool:
    # a lowered cap matters only if the search actually ran into it
    if stats["state_cap_hit"]:
        return True
    if budget.max_area < budget.theoretical_area and stats["frontier_left"]:
        return True
    return budget.max_intermediate_length < budget.theoretical_length and stats["pruned_by_length"] > 0


def freely_reduced_words(n: int, length: int):
    """All freely reduced words of a given length, in letter order."""
    letters = sorted([g for i in range(1, n + 1) for g in (i, -i)], key=letter_key)

    def rec(prefix):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for a in letters:
            if prefix and prefix[-1] == -a:
                continue
            prefix.append(a)
            yield from rec(prefix)
            prefix.pop()

    yield from rec([])


def solve_conjugacy(
    P: Presentation,
    u: Word,
    v: Word,
    cond: Condition | str = Condition.WSTAR,
    max_conj_len: int | None = 3,
    max_area: int | None = None,
    max_len: int | None = None,
    max_states: int | None = 20_000,
) -> Verdict:
    """Search conjugators ``w`` with ``u = w v w^-1`` by increasing length."""
    cond = Condition.parse(cond)
    _require(P, cond)
    u, v = tuple(u), tuple(v)
    if not (is_freely_reduced(u) and is_freely_reduced(v)):
        raise ValueError("words must be freely reduced")
    if not u and not v:
        raise ValueError("at least one of the words must be nonempty")
    search_cond = {Condition.VSTAR: Condition.WSTAR, Condition.V: Condition.W}.get(cond, cond)
    bound = conj_length_bound(P, search_cond, len(u), len(v), check=False)
    limit = bound if max_conj_len is None else min(bound, max_conj_len)
    stats = {"theoretical_conjugator_length": _big(bound), "conjugator_length_searched": limit, "candidates": 0}
    if u == v:
        return Verdict(CONJUGATE, [], (), reason="identical words", stats=stats)
    if not Abelianization(P).is_zero(u + inverse(v)):
        return Verdict(NOT_CONJUGATE, reason="different images in the abelianization", stats=stats)
    undecided = False
    for length in range(limit + 1):
        for w in freely_reduced_words(P.n, length):
            stats["candidates"] += 1
            target = free_reduce(u + w + inverse(v) + inverse(w))
            res = solve_word(P, target, cond, max_area, max_len, max_states)
            if res.kind == TRIVIAL:
                stats["word_stats"] = res.stats
                return Verdict(CONJUGATE, res.witness, w, stats=stats)
            if res.kind == INCONCLUSIVE:
                undecided = True
    if limit >= bound and not undecided:
        return Verdict(NOT_CONJUGATE, reason="every conjugator within the length bound fails", stats=stats)
    return Verdict(INCONCLUSIVE, reason="conjugator search stopped at a user cap", stats=stats)


def _big(x: int):
    return x if x < 10**18 else f"~10^{len(str(x)) - 1}"


def verify_conjugator(P: Presentation, u: Word, v: Word, verdict: Verdict) -> bool:
    if verdict.kind != CONJUGATE or verdict.conjugator is None:
        return False
    w = verdict.conjugator
    return verify_witness(P, free_reduce(u + w + inverse(v) + inverse(w)), verdict.witness or [])

