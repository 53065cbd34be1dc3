from itertools import combinations_with_replacement

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from tnskit import cohomology as co
from tnskit.charpair import builtin, product
from tnskit.cohomology import build_ring
from tnskit.polytope import face_nonempty, h_vector

from conftest import ring


def test_dims_are_h_vectors(fixture_name):
    cp = builtin(fixture_name)
    assert ring(fixture_name).dims() == h_vector(cp.polytope)


def test_cp2_ring():
    R = ring("cp2")
    x = [R.generator(j) for j in (1, 2, 3)]
    assert x[0] == x[1] == x[2]
    assert R.integrate(R.multiply(x[0], x[1])) == 1
    assert R.dims() == (1, 1, 1)
    with pytest.raises(co.DegreeOverflow):
        R.power(x[0], 3)


def test_b4_relations():
    R = ring("b4")
    # facets 1 and 2 are opposite with x1 = x2 = x3 + x4; x3, x4 play x, y
    x, y = R.generator(3), R.generator(4)
    zero = R.zero(2)
    assert R.multiply(x, y) == zero
    assert R.multiply(x, x) + R.multiply(y, y) == zero
    assert R.power(x + y, 2) == zero
    assert R.integrate(R.power(x, 2)) == 1
    assert R.integrate(R.power(y, 2)) == -1
    # x^3 = y^3 = 0 holds trivially past the top degree
    assert R.reduce({(1, 1, 1): 1}) == R.zero(3)
    P = R.pairing_matrix(1)
    from tnskit.exactalg import inertia

    assert inertia(P) == (1, 1, 0)


def test_paper_bases():
    assert ring("paper_P1").basis[2] == ((8, 9), (7, 9), (7, 8), (6, 6), (5, 6), (5, 5))
    assert ring("paper_P2").basis[2] == ((9, 9), (8, 9), (8, 8), (6, 6), (5, 6), (3, 3))


def test_reduce_basics():
    R = ring("cp2")
    assert R.reduce({(1,): 1}) == R.basis_class(1, 0)
    B = ring("bott_cube")
    assert B.reduce({(1, 2): 1}).is_zero()
    with pytest.raises(co.NonHomogeneous):
        B.reduce({(1,): 1, (1, 3): 1})
    a = B.generator(3)
    assert B.multiply(B.one(), a) == a


def test_cp2_squared_normalization():
    cp2 = builtin("cp2")
    R = build_ring(product(cp2, cp2))
    # x pulls back from the first factor, y from the second
    x, y = R.generator(1), R.generator(4)
    assert R.integrate(R.multiply(R.power(x, 2), R.power(y, 2))) == 1
    from tnskit.exactalg import inertia

    assert inertia(R.pairing_matrix(2)) == (2, 1, 0)
    assert len(R.pairing_matrix(1)) == 2


def test_semidef_class_is_minus_its_mirror():
    # in paper_P2, l = sum over S1 of (third row) x_i equals -l' over S2
    R = ring("paper_P2")
    lam = builtin("paper_P2").lam
    l = R.reduce({(i,): lam[2][i - 1] for i in (4, 5, 6)})
    lp = R.reduce({(i,): lam[2][i - 1] for i in (7, 8, 9)})
    assert l == -lp and not l.is_zero()


@pytest.mark.parametrize("name", ["paper_P1", "paper_P2", "bott_cube", "b4"])
def test_reduction_matches_groebner(name):
    cp = builtin(name)
    R = ring(name)
    m = cp.num_facets
    x = sp.symbols(f"x1:{m + 1}")
    gens = [sum(cp.lam[r][j] * x[j] for j in range(m)) for r in range(cp.dim)]
    gens += [sp.prod([x[i - 1] for i in S]) for S in R.missing_faces]
    G = sp.groebner(gens, *x, order="grevlex", domain="QQ")
    basis = [sp.prod([x[i - 1] for i in b]) for b in R.basis[2]]
    for i, j in combinations_with_replacement(range(1, m + 1), 2):
        coords = R.reduce({(i, j): 1}).coords
        expr = x[i - 1] * x[j - 1] - sum(sp.Rational(c.numerator, c.denominator) * b for c, b in zip(coords, basis))
        assert G.reduce(sp.expand(expr))[1] == 0


def test_poincare_duality(fixture_name):
    R = ring(fixture_name)
    from tnskit.exactalg import rank

    for k in range(R.n + 1):
        P = R.pairing_matrix(k)
        assert rank(P) == len(P)


def test_vertex_normalization(fixture_name):
    from tnskit.charpair import vertex_sign

    cp = builtin(fixture_name)
    R = ring(fixture_name)
    for v, t in enumerate(cp.polytope.vertices):
        assert R.integrate(R.reduce({tuple(sorted(t)): 1})) == vertex_sign(cp, v)


@given(st.sampled_from(["paper_P1", "bott_cube", "hirzebruch3", "cp3"]), st.data())
@settings(max_examples=40, deadline=None)
def test_ring_axioms(name, data):
    R = ring(name)
    coeff = st.integers(-3, 3)
    a = R.linear([data.draw(coeff) for _ in range(R.m)])
    b = R.linear([data.draw(coeff) for _ in range(R.m)])
    c = R.linear([data.draw(coeff) for _ in range(R.m)])
    assert R.multiply(a, b) == R.multiply(b, a)
    assert R.multiply(a, b + c) == R.multiply(a, b) + R.multiply(a, c)
    if R.n >= 3:
        assert R.multiply(R.multiply(a, b), c) == R.multiply(a, R.multiply(b, c))


def test_missing_face_products_vanish(fixture_name):
    R = ring(fixture_name)
    cp = builtin(fixture_name)
    for S in R.missing_faces:
        if len(S) <= R.n:
            assert not face_nonempty(cp.polytope, S)
            assert R.reduce({S: 1}).is_zero()


def test_integrate_rejects_wrong_degree():
    R = ring("cp2")
    with pytest.raises(co.DegreeMismatch):
        R.integrate(R.generator(1))
