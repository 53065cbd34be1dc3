import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tnskit import polytope as pt
from tnskit.charpair import builtin
from tnskit.polytope import SimplePolytope


def cube():
    I = pt.simplex(1)
    return pt.product(pt.product(I, I), I)


def belt():
    return builtin("paper_P1").polytope


def test_face_queries_on_cube_and_simplex():
    C = cube()
    # facets 1, 2 come from the first interval and are opposite
    assert not pt.face_nonempty(C, {1, 2})
    assert pt.face_nonempty(C, {1, 3})
    D = pt.simplex(3)
    assert not pt.face_nonempty(D, {1, 2, 3, 4})
    for k in range(1, 4):
        for i in range(1, 5):
            S = {1, 2, 3, 4} - {i}
            assert pt.face_nonempty(D, list(S)[:k])
    with pytest.raises(pt.IndexOutOfRange):
        pt.face_nonempty(C, {7})


def test_missing_faces_and_flag():
    assert pt.minimal_missing_faces(pt.simplex(3)) == [(1, 2, 3, 4)]
    assert pt.minimal_missing_faces(cube()) == [(1, 2), (3, 4), (5, 6)]
    assert pt.is_flag(cube())
    assert not pt.is_flag(pt.simplex(3))
    B = belt()
    assert any(len(S) == 3 for S in pt.minimal_missing_faces(B))
    assert not pt.is_flag(B)


def test_f_and_h_vectors():
    assert pt.h_vector(cube()) == (1, 3, 3, 1)
    assert pt.h_vector(pt.simplex(3)) == (1, 1, 1, 1)
    assert pt.f_vector(belt()) == (14, 21, 9)
    assert pt.h_vector(belt()) == (1, 6, 6, 1)


def test_products():
    I, T = pt.simplex(1), pt.simplex(2)
    sq = pt.product(I, I)
    assert (sq.num_facets, len(sq.vertices)) == (4, 4)
    prism = pt.product(T, I)
    assert (prism.num_facets, len(prism.vertices)) == (5, 6)
    assert pt.h_vector(cube()) == (1, 3, 3, 1) and cube().num_facets == 6


def test_connected_sums():
    sq = pt.product(pt.simplex(1), pt.simplex(1))
    hexagon, _ = pt.connected_sum(sq, 0, sq, 0)
    assert (hexagon.num_facets, len(hexagon.vertices)) == (6, 6)
    R, qmap = pt.connected_sum(cube(), 0, cube(), 0)
    assert (R.num_facets, len(R.vertices)) == (9, 14)
    assert pt.h_vector(R) == (1, 6, 6, 1)
    D, _ = pt.connected_sum(pt.simplex(3), 0, pt.simplex(3), 0)
    assert (D.num_facets, len(D.vertices)) == (5, 6)
    with pytest.raises(pt.InvalidMatching):
        pt.connected_sum(cube(), 0, cube(), 0, {1: 1, 3: 1, 5: 5})


def test_truncations():
    sq = pt.truncate_face(pt.simplex(2), pt.simplex(2).vertices[0])
    assert (sq.num_facets, len(sq.vertices)) == (4, 4)
    edge = pt.truncate_face(cube(), {1, 3})
    vertex = pt.truncate_face(cube(), {1, 3, 5})
    for P in (edge, vertex):
        assert (P.num_facets, len(P.vertices)) == (7, 10)
        assert pt.f_vector(P) == (10, 15, 7)
    with pytest.raises(pt.FacetTruncation):
        pt.truncate_face(cube(), {1})
    with pytest.raises(pt.EmptyFace):
        pt.truncate_face(cube(), {1, 2})


def test_validation_reports_violations():
    good = pt.simplex(2).vertices
    with pytest.raises(pt.InvalidPolytope) as err:
        SimplePolytope(2, 3, (good[0], good[1], pt._swap_front(good[2])))
    assert any("orientation" in v for v in err.value.violations)
    with pytest.raises(pt.InvalidPolytope):
        SimplePolytope(2, 4, good)
    with pytest.raises(pt.InvalidPolytope):
        SimplePolytope(3, 6, cube().vertices[:-1])


def test_reversal_and_facets():
    C = cube()
    R = C.reversed()
    assert {frozenset(v) for v in R.vertices} == {frozenset(v) for v in C.vertices}
    F, old = pt.facet_polytope(C, 1)
    assert F.num_facets == 4 and len(old) == 4 and 1 not in old and 2 not in old


@given(st.data())
@settings(max_examples=30, deadline=None)
def test_random_truncations_keep_dehn_sommerville(data):
    P = belt() if data.draw(st.booleans()) else cube()
    for _ in range(data.draw(st.integers(1, 3))):
        faces = sorted(
            (tuple(sorted(f)) for f in P.faces() if 2 <= len(f) <= P.dim),
        )
        G = data.draw(st.sampled_from(faces))
        P = pt.truncate_face(P, G)
        h = pt.h_vector(P)
        assert h == h[::-1]
        assert sum(h) == len(P.vertices)


@pytest.mark.parametrize("seed", range(5))
def test_relabel_preserves_counts(seed):
    rng = random.Random(seed)
    P = belt()
    perm = list(range(1, 10))
    rng.shuffle(perm)
    Q = pt.relabel(P, {i + 1: perm[i] for i in range(9)})
    assert pt.f_vector(Q) == pt.f_vector(P)
    assert sorted(map(len, pt.minimal_missing_faces(Q))) == sorted(map(len, pt.minimal_missing_faces(P)))
