import random
from itertools import product as cartesian

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tnskit import charpair as chp
from tnskit import exactalg as ea
from tnskit import polytope as pt
from tnskit.charpair import CharacteristicPair, builtin

from conftest import random_unimodular


def test_validate():
    assert chp.validate(builtin("cp2")) == []
    bad = CharacteristicPair(builtin("cp2").polytope, [[1, 0, -2], [0, 1, -1]])
    problems = chp.validate(bad)
    # only the vertex {2,3} is singular: det((0,1),(-2,-1)) = 2
    assert len(problems) == 1 and "[2, 3]" in problems[0] and "determinant 2" in problems[0]
    with pytest.raises(chp.InvalidPair):
        bad.checked()
    assert chp.validate(builtin("paper_P1")) == []


def test_builtin_matrices():
    assert builtin("cp2").num_facets == 3
    assert builtin("paper_P1").lam == chp.PAPER_P1
    assert builtin("paper_P2").lam == chp.PAPER_P2
    assert builtin("nontns_4gon_1").lam == ((1, 0, 1, 2), (0, 1, 1, 1))
    assert builtin("nontns_4gon_3").lam == ((1, 0, 1, -2), (0, 1, -1, 1))
    assert builtin("cp5").dim == 5
    with pytest.raises(chp.UnknownName):
        builtin("nope")


def test_signs():
    assert set(chp.vertex_signs(builtin("cp2"))) == {1}
    assert set(chp.vertex_signs(builtin("cp2bar"))) == {-1}
    assert sorted(chp.vertex_signs(builtin("b4"))) == [-1, -1, 1, 1]


def test_indices():
    cp = builtin("cp2")
    assert sorted(chp.vertex_index(cp, v, (1, 2)) for v in range(3)) == [0, 1, 2]
    sq = builtin("cp1xcp1")
    nu = next(chp.generic_directions(2))
    assert sorted(chp.vertex_index(sq, v, nu) for v in range(4)) == [0, 1, 1, 2]
    # the sum of a vertex's dual basis lies inside its own cone
    for v in range(3):
        B = chp.vertex_block(cp, v)
        Binv = ea.inverse(B)
        nu = ea.matvec(ea.transpose(Binv), [1, 1])
        assert chp.vertex_index(cp, v, nu) == 0
    with pytest.raises(chp.NonGenericDirection):
        chp.vertex_index(cp, 0, (1, 0))


def test_signature_values():
    assert chp.signature(builtin("cp2")) == 1
    assert chp.signature(builtin("cp2bar")) == -1
    assert chp.signature(builtin("cp1xcp1")) == 0
    assert chp.signature(builtin("b4")) == 0


def test_characteristic_submanifolds():
    assert builtin("cp2").dim == 2
    sub = chp.characteristic_submanifold(builtin("cp2"), 1)
    assert sub.dim == 1 and sub.num_facets == 2
    sub = chp.characteristic_submanifold(builtin("cp1xcp1"), 1)
    assert sub.dim == 1 and sub.num_facets == 2
    sub = chp.characteristic_submanifold(builtin("paper_P1"), 4)
    F, _ = pt.facet_polytope(builtin("paper_P1").polytope, 4)
    assert chp.validate(sub) == [] and sub.num_facets == F.num_facets


def test_products():
    c = builtin("cp1")
    sq = chp.product(c, c)
    assert sq.lam == ((1, -1, 0, 0), (0, 0, 1, -1))
    cp2 = builtin("cp2")
    big = chp.product(cp2, cp2)
    assert big.dim == 4 and big.num_facets == 6 and len(big.polytope.vertices) == 9
    names = ["cp1", "cp2", "cp2bar", "b4", "hirzebruch1", "nontns_4gon_3"]
    for a, b in cartesian(names[:4], names):
        x, y = builtin(a), builtin(b)
        assert chp.signature(chp.product(x, y)) == chp.signature(x) * chp.signature(y)


def test_connected_sum():
    b4 = chp.equivariant_connected_sum(builtin("cp2"), 0, builtin("cp2bar"), 0)
    assert b4.lam == builtin("b4").lam
    assert chp.signature(b4) == 0
    for v in range(3):
        with pytest.raises(chp.IncompatibleSigns, match="opposite vertex signs"):
            chp.equivariant_connected_sum(builtin("cp2"), v, builtin("cp2"), 0)


def test_blow_up():
    out = chp.blow_up(builtin("cp2"), (1, 2))
    assert out.column(4) == tuple(a + b for a, b in zip(out.column(1), out.column(2)))
    cube = chp.blow_up(builtin("bott_cube"), (1, 3))
    assert cube.num_facets == 7 and chp.validate(cube) == []
    with pytest.raises(pt.EmptyFace):
        chp.blow_up(builtin("bott_cube"), (1, 2))


@given(st.data())
@settings(max_examples=25, deadline=None)
def test_random_blow_ups_stay_valid(data):
    cp = builtin(data.draw(st.sampled_from(["bott_cube", "paper_P1", "paper_P2", "cp3"])))
    for _ in range(data.draw(st.integers(1, 2))):
        faces = sorted(tuple(sorted(f)) for f in cp.polytope.faces() if 2 <= len(f) <= cp.dim)
        cp = chp.blow_up(cp, data.draw(st.sampled_from(faces)))
        for v in range(len(cp.polytope.vertices)):
            assert abs(ea.det(chp.vertex_block(cp, v))) == 1


@pytest.mark.parametrize("seed", range(8))
def test_signature_invariance(seed):
    rng = random.Random(seed)
    for name in ("cp2", "b4", "hirzebruch2", "nontns_4gon_2", "paper_P1", "cp3"):
        cp = builtin(name)
        s = chp.signature(cp)
        g = random_unimodular(rng, cp.dim)
        assert chp.signature(chp.change_basis(cp, g)) == s
        perm = list(range(1, cp.num_facets + 1))
        rng.shuffle(perm)
        assert chp.signature(chp.relabel(cp, {i + 1: p for i, p in enumerate(perm)})) == s
        assert chp.vertex_signs(chp.change_basis(cp, g)) == chp.vertex_signs(cp)


def test_split_at_missing_face():
    parts = chp.split_at_missing_face(builtin("paper_P1"), (1, 2, 3))
    assert [old for _, old in parts] == [(1, 2, 3, 4, 5, 6), (1, 2, 3, 7, 8, 9)]
    for cp, _ in parts:
        assert pt.h_vector(cp.polytope) == (1, 3, 3, 1)
    with pytest.raises(ValueError):
        chp.split_at_missing_face(builtin("paper_P1"), (1, 2, 4))
