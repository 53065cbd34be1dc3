from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tnskit import forms
from tnskit.charpair import builtin, product
from tnskit.cohomology import CohClass, build_ring
from tnskit.exactalg import DimensionMismatch

from conftest import ring


@pytest.fixture(scope="module")
def cp2cp2():
    cp2 = builtin("cp2")
    return build_ring(product(cp2, cp2))


def test_cp2cp2_quadratic(cp2cp2):
    R = cp2cp2
    a = R.reduce({(1, 1): 1, (4, 4): 1})
    rep = forms.form_Qa(R, a, 2)
    assert rep.inertia == (2, 0, 0)
    assert rep.classification == forms.PSD
    assert rep.matrix == ((1, 0), (0, 1))


def test_cp2cp2_top_form(cp2cp2):
    rep = forms.form_Qa(cp2cp2, cp2cp2.one(), 4)
    assert rep.coefficients == {(2, 2): 6}
    assert rep.classification == forms.PSD
    assert rep.value((3, -2)) == 6 * 9 * 4


def test_zero_form():
    R = ring("paper_P1")
    rep = forms.form_Qa(R, R.zero(1), 2)
    assert rep.classification == forms.ZERO and rep.inertia.rank == 0


def test_intersection_forms():
    assert forms.intersection_form(ring("cp2")).inertia == (1, 0, 0)
    assert forms.intersection_form(ring("b4")).inertia == (1, 1, 0)
    assert forms.intersection_form(ring("hirzebruch1")).inertia == (1, 1, 0)
    with pytest.raises(DimensionMismatch):
        forms.intersection_form(ring("bott_cube"))


def test_degree_checks():
    R = ring("bott_cube")
    with pytest.raises(forms.DegreeMismatch):
        forms.form_Qa(R, R.one(), 2)


def test_scan_finds_cp2cp2_witness(cp2cp2):
    hits = [r for r in forms.quadratic_family_scan(cp2cp2, 1, 1) if r.classification == forms.PSD]
    assert any(r.inertia == (2, 0, 0) for r in hits)


@given(st.sampled_from(["paper_P1", "paper_P2", "bott_cube", "b4", "hirzebruch2"]), st.data())
@settings(max_examples=40, deadline=None)
def test_admissible_witnesses_recheck(name, data):
    R = ring(name)
    d = R.n - 2
    coords = tuple(Fraction(data.draw(st.integers(-2, 2))) for _ in R.basis[d])
    rep = forms.form_Qa(R, CohClass(d, coords), 2)
    assert sum(rep.inertia) == len(R.basis[1])
    if rep.classification == forms.ADMISSIBLE:
        plus, minus = rep.witnesses
        assert rep.value(plus) > 0 > rep.value(minus)
    # the Gram matrix and the coefficient dict describe the same form
    x = [data.draw(st.integers(-3, 3)) for _ in R.basis[1]]
    gram = sum(rep.matrix[i][j] * x[i] * x[j] for i in range(len(x)) for j in range(len(x)))
    assert gram == rep.value(x)


def test_form_matches_direct_integration():
    R = ring("paper_P2")
    a = R.reduce({(4,): 1, (5,): 1, (6,): 1})
    rep = forms.form_Qa(R, a, 2)
    for x in [(1, 0, 0, 0, 0, 0), (1, -1, 2, 0, 3, 1), (0, 2, 0, -1, 0, 1)]:
        cls = CohClass(1, tuple(Fraction(t) for t in x))
        assert rep.value(x) == R.integrate(R.multiply(a, R.power(cls, 2)))


def test_spiral_order():
    pts = list(forms.spiral(2, 2))
    assert len(pts) == 24 and all(max(map(abs, p)) == 1 for p in pts[:8])
