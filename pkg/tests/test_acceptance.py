"""Acceptance gate: one group of checks per numbered criterion.

The terminal summary (see conftest) prints a PASS/FAIL line per criterion.
"""

import random
import time
from fractions import Fraction

import pytest

from conftest import p_n
from smallcancel import (
    boundary_data,
    build_star_graph,
    check_cell_condition,
    check_vertex_condition,
    curvature_check,
    enumerate_reduced_circuits,
    parse_presentation,
    parse_word,
    pe_weights,
    table_lookup,
    validate_diagram,
)
from smallcancel.conditions import diagram_type_check
from smallcancel.diagram import is_vertex_reduced, random_weights, verify_weight_hypotheses
from smallcancel.generate import random_diagram, random_nonreduced_disk, random_vertex_reduced_disk
from smallcancel.moves import find_site, reduction_move
from smallcancel.solvers import (
    Abelianization,
    area_bound,
    conj_length_bound,
    count_words,
    solve_conjugacy,
    solve_word,
    verify_conjugator,
    verify_witness,
)
from smallcancel.stargraph import circuit_counts
from smallcancel.words import free_reduce

SURFACE = "<a,b,c,d | a*b*a^-1*b^-1*c*d*c^-1*d^-1>"
EXAMPLE2 = "<x,y | y^2*x = x*y^2>"


def _timed(fn, limit):
    t = time.perf_counter()
    out = fn()
    elapsed = time.perf_counter() - t
    assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
    return out


@pytest.mark.criterion(1)
def test_circuit_counts_and_named_circuit():
    P = p_n(2)

    def run():
        S = build_star_graph(P)
        return S, enumerate_reduced_circuits(S, 5)

    S, circuits = _timed(run, 1.0)
    counts = circuit_counts(circuits)
    assert (counts[3], counts[4], counts[5]) == (0, 1, 2)
    wanted = {"+x", "+y", "+z", "-z", "-y"}
    names = [{S.vertex_name(v) for v in c.vertices(S)} for c in circuits if len(c) == 5]
    assert wanted in names


@pytest.mark.criterion(2)
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_vertex_condition_certified(n):
    outcome = _timed(lambda: check_vertex_condition(p_n(n), "W*"), 1.0)
    assert outcome.verdict == "Certified", outcome.witness


@pytest.mark.criterion(2)
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_cell_condition_not_certified(n):
    outcome = _timed(lambda: check_cell_condition(p_n(n), "W"), 1.0)
    assert outcome.verdict == "NotCertified"


@pytest.mark.criterion(2)
def test_second_example_fails_vertex_condition():
    outcome = _timed(lambda: check_vertex_condition(parse_presentation(EXAMPLE2), "W*"), 1.0)
    assert outcome.verdict == "NotCertified"
    assert outcome.witness["kind"] == "circuit"
    assert outcome.witness["circuit"]["length"] == 3


@pytest.mark.criterion(3)
def test_table_boundary_cases():
    assert table_lookup("W*", 3, (3, 7, 42))
    assert not table_lookup("V*", 3, (3, 7, 42))
    assert table_lookup("V*", 3, (3, 7, 43))
    assert table_lookup("W*", 6, (3,) * 6)
    assert not table_lookup("V*", 6, (3,) * 6)
    assert table_lookup("V*", 6, (3, 3, 3, 3, 3, 4))


@pytest.mark.criterion(4)
def test_curvature_identity_random():
    corpus = [p_n(2), p_n(3), parse_presentation(SURFACE), parse_presentation(EXAMPLE2)]
    start = time.perf_counter()
    failures = []
    for k in range(200):
        rng = random.Random(k)
        P = corpus[k % len(corpus)]
        tau = k % 3
        M = random_diagram(P, rng, tau, cells=12)
        report = validate_diagram(P, M)
        assert report.ok and report.tau == tau and M.num_cells <= 12
        for _ in range(3):
            lhs, rhs = curvature_check(M, random_weights(M, rng))
            if lhs != rhs:
                failures.append((k, lhs, rhs))
    assert failures == []
    assert time.perf_counter() - start < 10


@pytest.mark.criterion(5)
@pytest.mark.parametrize(
    "text,cond",
    [("<x,y,z | z^2 = y, y*x = x*y>", "W*"), ("<x,y,z | z^3 = y, y*x = x*y>", "W*"), (SURFACE, "W*"), (SURFACE, "V*")],
)
def test_checker_soundness_on_diagrams(text, cond):
    P = parse_presentation(text)
    assert check_vertex_condition(P, cond).certified
    failures = []
    for k in range(100):
        M = random_vertex_reduced_disk(P, random.Random(k), cells=10)
        assert validate_diagram(P, M).ok and is_vertex_reduced(P, M)[0]
        if not diagram_type_check(P, M, cond):
            failures.append(k)
    assert failures == []


@pytest.mark.criterion(6)
def test_reduction_moves():
    corpus = [p_n(2), p_n(3), parse_presentation(SURFACE), parse_presentation(EXAMPLE2)]
    failures = []
    for k in range(100):
        rng = random.Random(k)
        P = corpus[k % len(corpus)]
        M = random_nonreduced_disk(P, rng, cells=8)
        assert not is_vertex_reduced(P, M)[0]
        words = boundary_data(M)[0]
        for _ in range(M.num_cells):
            if is_vertex_reduced(P, M)[0]:
                break
            kind, site = find_site(P, M)
            parts = reduction_move(P, M, kind, site)
            if sum(D.num_cells for D in parts) != M.num_cells - 2:
                failures.append((k, "cell count"))
            if not all(validate_diagram(P, D).ok for D in parts):
                failures.append((k, "invalid part"))
            if boundary_data(parts[0])[0] != words:
                failures.append((k, "boundary word"))
            M = parts[0]
        if not is_vertex_reduced(P, M)[0]:
            failures.append((k, "did not terminate reduced"))
    assert failures == []


@pytest.mark.criterion(7)
def test_word_solver():
    P = p_n(2)
    start = time.perf_counter()
    for text in ["z^2*y^-1", "y*x*y^-1*x^-1", "z^2*x*z^-2*x^-1"]:
        w = parse_word(text, P.generators)
        verdict = solve_word(P, w, "W*")
        assert verdict.kind == "Trivial"
        assert len(verdict.witness) <= 3
        assert len(verdict.witness) <= area_bound(P, "W*", len(w))
        assert verify_witness(P, w, verdict.witness)
    ab = Abelianization(P)
    rng = random.Random(7)
    seen = 0
    while seen < 1000:
        w = free_reduce(rng.choice([1, -1, 2, -2, 3, -3]) for _ in range(rng.randint(1, 10)))
        if not w or ab.is_zero(w):
            continue
        seen += 1
        assert solve_word(P, w, "W*").kind != "Trivial", w
    assert time.perf_counter() - start < 30


@pytest.mark.criterion(8)
def test_conjugacy_solver():
    P = p_n(2)
    word = lambda s: parse_word(s, P.generators)
    start = time.perf_counter()
    u, v = word("z*x*z^-1"), word("x")
    verdict = solve_conjugacy(P, u, v, "W*")
    assert verdict.kind == "Conjugate" and verdict.conjugator == word("z")
    assert verify_conjugator(P, u, v, verdict)
    assert solve_conjugacy(P, word("x"), word("z"), "W*").kind == "NotConjugate"
    u = word("x*y*z")
    verdict = solve_conjugacy(P, u, u, "W*")
    assert verdict.kind == "Conjugate" and verdict.conjugator == ()
    assert time.perf_counter() - start < 30


@pytest.mark.criterion(9)
def test_bound_arithmetic(monkeypatch):
    P = p_n(2)
    assert area_bound(P, "W*", 6) == 6
    # 800 l^2 / (sqrt(3) pi) is about 147.02 l^2
    assert area_bound(P, "W", 4, check=False) == 2352
    assert area_bound(P, "W", 10, check=False) == 14702
    assert count_words(2, 1) == 5
    E = parse_presentation(EXAMPLE2)
    monkeypatch.setattr("smallcancel.solvers.conjugator_search_length", lambda *a: 1)
    for lu, lv in [(1, 1), (2, 5), (7, 3)]:
        assert conj_length_bound(E, "W*", lu, lv, check=False) == 5 + 2 * max(lu, lv)


@pytest.mark.criterion(10)
def test_surface_group_linear_bound():
    P = parse_presentation(SURFACE)
    outcome = check_vertex_condition(P, "V*")
    assert outcome.certified
    assert outcome.bounds["degree_lower_bounds"] == [8]
    failures = []
    for k in range(100):
        M = random_vertex_reduced_disk(P, random.Random(k), cells=10)
        result = verify_weight_hypotheses(M, pe_weights(M), Fraction(1, 903), 0)
        if not (result.holds and result.within_bound and result.measured <= result.bound):
            failures.append((k, result.failures[:2]))
    assert failures == []
