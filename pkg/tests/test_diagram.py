import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import p_n
from smallcancel import (
    Diagram,
    boundary_data,
    curvature_check,
    is_reduced,
    is_vertex_reduced,
    parse_presentation,
    pe_weights,
    suppressed_view,
    validate_diagram,
    verify_weight_hypotheses,
)
from smallcancel.diagram import Face, random_weights, vertex_links
from smallcancel.generate import (
    _attach_options,
    _Builder,
    commutator_ring,
    flower,
    one_cell_disk,
    random_compact_disk,
    random_diagram,
    random_vertex_reduced_disk,
)
from smallcancel.moves import double
from smallcancel.words import inverse, rotate

CORPUS = [
    "<x,y,z | z^2 = y, y*x = x*y>",
    "<x,y,z | z^3 = y, y*x = x*y>",
    "<a,b,c,d | a*b*a^-1*b^-1*c*d*c^-1*d^-1>",
    "<x,y | y^2*x = x*y^2>",
    "<a,b | a*b*a^-1*b^-1>",
    "<a,b | a^3, b^2, a*b*a*b*a*b*a*b*a*b*a*b*a*b>",
]


def _is_rotation(u, v):
    return len(u) == len(v) and any(rotate(u, k) == tuple(v) for k in range(len(u)))


def _glued_pair(P, relator, m, mirror=None):
    """Disk of two cells of ``relator`` sharing ``m`` consecutive edges."""
    out = []
    b0 = _Builder()
    b0.seed_cell(P.relators[relator].letters, relator, 1)
    (fb,) = b0.boundary_faces()
    labels = [b0.labels[d] for d in b0.orbit(b0.start[fb])]
    for mm, i, o, w in _attach_options(P, labels):
        if mm != m or i != relator or (mirror is not None and (o == -1) != mirror):
            continue
        b = b0.copy()
        b.attach(fb, b.start[fb], m, w, i, o)
        out.append(b.build())
    return out


def test_one_cell_disk():
    P = p_n(2)
    i = next(k for k, r in enumerate(P.relators) if len(r) == 3)
    M = one_cell_disk(P, i)
    report = validate_diagram(P, M)
    assert report.ok and report.tau == 1
    (word,), length = boundary_data(M)
    r = P.relators[i].letters
    assert length == 3
    assert _is_rotation(word, r) or _is_rotation(word, inverse(r))
    assert is_vertex_reduced(P, M)[0]


def test_sphere_from_two_cells():
    P = p_n(2)
    (S,) = double(one_cell_disk(P, 0))
    report = validate_diagram(P, S)
    assert report.ok and report.tau == 0 and S.num_cells == 2
    with pytest.raises(ValueError):
        boundary_data(S)


def test_wrong_face_word_is_invalid():
    P = p_n(2)
    M = one_cell_disk(P, 0)
    labels = list(M.labels)
    labels[0], labels[M.twin[0]] = 1, -1
    bad = Diagram(tuple(labels), M.twin, M.nxt, M.faces)
    report = validate_diagram(P, bad)
    assert not report.ok
    assert any("relator" in f for f in report.findings)


def test_broken_twin_is_invalid():
    M = one_cell_disk(p_n(2), 0)
    twin = list(M.twin)
    twin[0] = 0
    report = validate_diagram(p_n(2), Diagram(M.labels, tuple(twin), M.nxt, M.faces))
    assert not report.ok


@pytest.mark.parametrize("text", CORPUS)
def test_two_cells_sharing_an_edge(text):
    P = parse_presentation(text)
    for i, r in enumerate(P.relators):
        for M in _glued_pair(P, i, 1):
            assert validate_diagram(P, M).ok
            assert boundary_data(M)[1] == 2 * len(r) - 2


def test_mirror_pair_is_not_reduced():
    P = p_n(2)
    found = 0
    for M in _glued_pair(P, 0, 1, mirror=True):
        red, witness = is_reduced(P, M)
        if not red:
            found += 1
            assert witness.backtrack
            assert not is_vertex_reduced(P, M)[0]
    assert found


def test_commutator_ring():
    P = p_n(2)
    i = next(k for k, r in enumerate(P.relators) if len(r) == 4)
    M = commutator_ring(P, i)
    report = validate_diagram(P, M)
    assert report.ok and report.tau == 2
    words, length = boundary_data(M)
    assert [len(w) for w in words] == [4, 4] and length == 8
    lhs, rhs = curvature_check(M, random_weights(M, random.Random(0)))
    assert lhs == rhs == 0


def test_square_with_right_angles():
    P = parse_presentation("<a,b | a*b*a^-1*b^-1>")
    M = one_cell_disk(P)
    g = {c: Fraction(1, 2) for c in M.corners}
    assert curvature_check(M, g) == (2, 2)


def test_pe_weights_degrees():
    P = parse_presentation("<x,y,z | z^2 = y, y*x = x*y>")
    for i, expected in [(0, None), (1, None)]:
        M = one_cell_disk(P, i)
        d = len(P.relators[i])
        assert set(pe_weights(M).values()) == {Fraction(d - 2, d)}
    big = parse_presentation("<a | a^42>")
    assert set(pe_weights(one_cell_disk(big)).values()) == {Fraction(20, 21)}


def test_interior_chain_becomes_one_long_edge():
    P = parse_presentation("<a,b,c,d | a*b*a^-1*b^-1*c*d*c^-1*d^-1>")
    (M, *_) = _glued_pair(P, 0, 4)
    view = suppressed_view(M)
    interior = [e for e in view.long_edges if e.interior]
    assert len(interior) == 1 and len(interior[0].word) == 4
    assert sum(view.suppressed) == 3
    for v in view.surviving_vertices:
        if any(v == M.head[d] for d in interior[0].darts):
            assert view.valence(v) == 3


def test_loop_counts_twice():
    P = parse_presentation("<a | a>")
    M = one_cell_disk(P)
    assert validate_diagram(P, M).ok
    (v,) = range(M.num_vertices)
    assert suppressed_view(M).valence(v) == 2


def test_inner_commutator_cells_have_degree_four():
    P = parse_presentation("<a,b | a*b*a^-1*b^-1>")
    seen = 0
    for k in range(10):
        M = random_compact_disk(P, random.Random(k), cells=9)
        view = suppressed_view(M)
        for f in M.relator_faces:
            if view.is_inner_cell(f) and not any(view.suppressed[M.head[d]] for d in M.faces[f].darts):
                seen += 1
                assert view.degree(f) == 4
    assert seen


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CORPUS), st.integers(0, 2), st.integers(1, 12), st.integers(0, 10**6))
def test_curvature_identity(text, tau, cells, seed):
    P = parse_presentation(text)
    rng = random.Random(seed)
    M = random_diagram(P, rng, tau, cells)
    report = validate_diagram(P, M)
    assert report.ok and report.tau == tau
    g = random_weights(M, rng)
    lhs, rhs = curvature_check(M, g)
    assert lhs == rhs == 2 * (2 - tau)
    # total weight read by vertices equals total read by cells
    by_vertex = sum(g[d] for ds in M.vertex_darts for d in ds if not M.is_boundary_dart(d))
    by_cell = sum(g[d] for f in M.relator_faces for d in M.faces[f].darts)
    assert by_vertex == by_cell


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CORPUS), st.integers(0, 2), st.integers(1, 12), st.integers(0, 10**6))
def test_degree_sum_identity(text, tau, cells, seed):
    P = parse_presentation(text)
    M = random_diagram(P, random.Random(seed), tau, cells)
    view = suppressed_view(M)
    # a closed ring of suppressed vertices has no ends and adds nothing to degrees
    open_edges = [e for e in view.long_edges if not e.closed]
    boundary_sides = sum(
        M.is_boundary_dart(e.darts[0]) + M.is_boundary_dart(M.twin[e.darts[0]]) for e in open_edges
    )
    assert sum(view.degree(f) for f in M.relator_faces) == 2 * len(open_edges) - boundary_sides
    for v in view.inner_vertices:
        assert view.valence(v) >= 3


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CORPUS), st.integers(1, 10), st.integers(0, 10**6))
def test_reduced_is_weaker_than_vertex_reduced(text, cells, seed):
    P = parse_presentation(text)
    M = random_diagram(P, random.Random(seed), 1, cells)
    if not is_reduced(P, M)[0]:
        assert not is_vertex_reduced(P, M)[0]


def test_links_cover_every_corner():
    P = p_n(3)
    M = random_vertex_reduced_disk(P, random.Random(3), cells=10)
    corners = sorted(c for comp in vertex_links(P, M) for c in comp.corners)
    assert corners == sorted(M.corners)


def test_json_round_trip():
    P = p_n(2)
    M = random_diagram(P, random.Random(5), 2, 8)
    again = Diagram.from_json(json.loads(M.dumps()))
    assert again == M
    assert validate_diagram(P, again).ok


def test_json_rejects_unknown_dart():
    data = one_cell_disk(p_n(2)).to_json()
    data["darts"][0]["twin"] = 999
    with pytest.raises(ValueError):
        Diagram.from_json(data)


def test_dot_export():
    dot = one_cell_disk(p_n(2)).to_dot(("x", "y", "z"))
    assert dot.startswith("digraph") and "z" in dot


def test_zero_weights_fail_at_inner_vertex():
    P = parse_presentation("<a,b,c,d | a*b*a^-1*b^-1*c*d*c^-1*d^-1>")
    M = random_vertex_reduced_disk(P, random.Random(1), cells=10)
    assert suppressed_view(M).inner_vertices
    result = verify_weight_hypotheses(M, {c: Fraction(0) for c in M.corners}, Fraction(1, 903))
    assert not result.holds
    assert any(f.startswith("vertex") for f in result.failures)


def test_polygon_weights_on_surface_group():
    P = parse_presentation("<a,b,c,d | a*b*a^-1*b^-1*c*d*c^-1*d^-1>")
    for k in range(20):
        M = random_vertex_reduced_disk(P, random.Random(k), cells=10)
        for variant in ("vertices", "cells"):
            r = verify_weight_hypotheses(M, pe_weights(M), Fraction(1, 903), variant=variant)
            if variant == "vertices":
                assert r.holds, r.failures
            if r.holds:
                assert r.within_bound
