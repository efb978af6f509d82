import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import p_n
from smallcancel import Diagram, boundary_data, is_vertex_reduced, parse_presentation, validate_diagram
from smallcancel.diagram import BOUNDARY, Face
from smallcancel.generate import _attach_options, _Builder, one_cell_disk, random_compact_disk, random_nonreduced_disk
from smallcancel.moves import MoveError, Site, double, find_site, mirror, reduce_diagram, reduction_move

CORPUS = [
    "<x,y,z | z^2 = y, y*x = x*y>",
    "<x,y,z | z^3 = y, y*x = x*y>",
    "<a,b,c,d | a*b*a^-1*b^-1*c*d*c^-1*d^-1>",
    "<x,y | y^2*x = x*y^2>",
    "<a,b | a*b*a^-1*b^-1>",
    "<p,q | p^4, q^4, p*q*p*q>",
]


def _mirror_pairs(P):
    b0 = _Builder()
    b0.seed_cell(P.relators[0].letters, 0, 1)
    (fb,) = b0.boundary_faces()
    labels = [b0.labels[d] for d in b0.orbit(b0.start[fb])]
    for m, i, o, w in _attach_options(P, labels):
        if m == 1 and i == 0 and o == -1:
            b = b0.copy()
            b.attach(fb, b.start[fb], 1, w, i, o)
            yield b.build()


def test_cancelling_a_mirror_pair_leaves_an_empty_disk():
    P = p_n(2)
    done = 0
    for M in _mirror_pairs(P):
        found = find_site(P, M)
        if found is None:
            continue
        kind, site = found
        (rest,) = reduction_move(P, M, kind, site)
        assert rest.num_cells == 0 and rest.tau == 1
        assert validate_diagram(P, rest).ok
        assert boundary_data(rest)[0] == boundary_data(M)[0]
        done += 1
    assert done


def test_bad_site_is_rejected():
    P = p_n(2)
    M = one_cell_disk(P)
    with pytest.raises(MoveError):
        reduction_move(P, M, "vertex", Site(0, 1))
    with pytest.raises(MoveError):
        reduction_move(P, M, "sideways", Site(0, 1))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CORPUS), st.integers(2, 9), st.integers(0, 10**6))
def test_moves_shrink_and_keep_the_boundary(text, cells, seed):
    P = parse_presentation(text)
    M = random_nonreduced_disk(P, random.Random(seed), cells)
    words = boundary_data(M)[0]
    while not is_vertex_reduced(P, M)[0]:
        kind, site = find_site(P, M)
        parts = reduction_move(P, M, kind, site)
        assert sum(D.num_cells for D in parts) == M.num_cells - 2
        assert parts[0].tau == 1
        assert all(D.tau == 0 for D in parts[1:])
        assert all(validate_diagram(P, D).ok for D in parts)
        assert boundary_data(parts[0])[0] == words
        M = parts[0]


def _punctured_double(P, rng):
    """A doubled disk with one cell turned into the hole: full of cancelling pairs."""
    S = max(double(random_compact_disk(P, rng, 5)), key=lambda D: D.num_cells)
    f = rng.choice(S.relator_faces)
    faces = list(S.faces)
    faces[f] = Face(faces[f].darts, BOUNDARY)
    return Diagram(S.labels, S.twin, S.nxt, tuple(faces))


def test_moves_split_off_spheres():
    splits = 0
    for k in range(40):
        P = parse_presentation(CORPUS[k % len(CORPUS)])
        if P.max_relator_length > 6:
            continue
        M = _punctured_double(P, random.Random(k))
        assert validate_diagram(P, M).ok
        words = boundary_data(M)[0]
        while not is_vertex_reduced(P, M)[0]:
            kind, site = find_site(P, M)
            parts = reduction_move(P, M, kind, site)
            assert sum(D.num_cells for D in parts) == M.num_cells - 2
            if len(parts) > 1:
                splits += 1
                assert all(D.tau == 0 and validate_diagram(P, D).ok for D in parts[1:])
            assert boundary_data(parts[0])[0] == words
            M = parts[0]
    assert splits > 10


def test_reduce_diagram_log():
    P = p_n(3)
    M = random_nonreduced_disk(P, random.Random(4), 8)
    R, log = reduce_diagram(P, M)
    assert is_vertex_reduced(P, R)[0]
    assert log and all(rec.cells_after == rec.cells_before - 2 for rec in log)
    assert R.num_cells <= M.num_cells - 2 * len(log)


@pytest.mark.parametrize("text", CORPUS)
def test_mirror_and_double(text):
    P = parse_presentation(text)
    M = one_cell_disk(P)
    W = mirror(M)
    assert validate_diagram(P, W).ok
    assert mirror(W) == M
    (S,) = double(M)
    assert validate_diagram(P, S).ok and S.tau == 0 and S.num_cells == 2
