import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tnskit import charpair as chp
from tnskit.charpair import builtin
from tnskit.cohomology import build_ring
from tnskit.polytope import h_vector
from tnskit.tns import NOT_TNS, check_tns
from tnskit.volpoly import (
    DegreeOverflow,
    DiffOp,
    apply,
    algebra_dims,
    condition_iv_scan,
    directional,
    evaluate,
    volume_polynomial,
)

from conftest import DIM3, ring


def _V(name):
    return volume_polynomial(ring(name))


def test_small_examples():
    assert _V("cp1").coefficients == {(1, 0): 1, (0, 1): 1}
    # (c1 + c2 + c3)^2 / 2
    V = _V("cp2").coefficients
    assert V == {e: Fraction(1, 2) if 2 in e else Fraction(1) for e in V}
    assert len(V) == 6
    assert algebra_dims(_V("cp2")) == (1, 1, 1)
    assert algebra_dims(_V("cp1xcp1")) == (1, 2, 1)
    assert algebra_dims(_V("paper_P1")) == (1, 6, 6, 1)


def test_cp2_times_cp2_normalization():
    V = volume_polynomial(build_ring(chp.product(builtin("cp2"), builtin("cp2"))))
    for a, b in [(1, 1), (2, -3), (Fraction(1, 2), 5)]:
        c = [a, 0, 0, b, 0, 0]
        assert factorial(4) * V(c) == 6 * Fraction(a) ** 2 * Fraction(b) ** 2


def test_dims_match_h_vector(fixture_name):
    assert algebra_dims(_V(fixture_name)) == h_vector(builtin(fixture_name).polytope)


@pytest.mark.parametrize("seed", range(3))
def test_directional_values(fixture_name, seed):
    V = _V(fixture_name)
    rng = random.Random(seed)
    c = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(V.num_vars)]
    d = V.degree
    assert apply(directional(c, d), V) == ({(0,) * V.num_vars: factorial(d) * V(c)} if V(c) else {})


def test_apply_basics():
    V = _V("cp3")
    assert apply(DiffOp.identity(4), V) == V.coefficients
    assert apply(DiffOp.monomial((3, 0, 0, 0)), V) == {(0, 0, 0, 0): Fraction(1)}
    with pytest.raises(DegreeOverflow):
        apply(DiffOp.monomial((2, 2, 0, 0)), V)


small = st.integers(-3, 3)


@given(st.lists(small, min_size=4, max_size=4), st.lists(small, min_size=4, max_size=4), small)
@settings(max_examples=40, deadline=None)
def test_apply_is_linear(a, b, k):
    V = _V("cp3")
    D1, D2 = DiffOp.linear(a), DiffOp.linear(b)
    lhs = apply(D1 + D2.scale(k), V)
    rhs = dict(apply(D1, V))
    for e, c in apply(D2, V).items():
        rhs[e] = rhs.get(e, 0) + k * c
    assert lhs == {e: c for e, c in rhs.items() if c}
    W = {e: 2 * c for e, c in V.coefficients.items()}
    assert apply(D1, W) == {e: 2 * c for e, c in apply(D1, V).items()}


def test_condition_iv_low_dimension():
    # V itself is a perfect square for CP^2
    rep = condition_iv_scan(_V("cp2"))
    assert rep.verdict == "fails"
    assert rep.witness.degree == 0
    assert condition_iv_scan(_V("hirzebruch1")).verdict == "holds"


@pytest.mark.parametrize("name", DIM3)
def test_condition_iv_agrees_with_cone(name):
    rep = condition_iv_scan(_V(name))
    assert (rep.verdict == "fails") == (check_tns(builtin(name)).status == NOT_TNS)
    if rep.verdict == "fails":
        assert rep.witness.degree == 1
        assert rep.witness_inertia.p == 0 or rep.witness_inertia.q == 0


def test_witness_ops_are_evaluated():
    V = _V("bott_cube")
    rep = condition_iv_scan(V, witness_ops=[DiffOp.identity(6), DiffOp.monomial((1, 0, 0, 0, 0, 0))])
    assert rep.verdict == "holds"
    assert [s for _, s in rep.extra] == ["indefinite", "indefinite"]
    assert evaluate(V.coefficients, [1] * 6) == V([1] * 6)
