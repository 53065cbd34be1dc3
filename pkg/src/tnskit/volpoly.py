"""Volume polynomials and their algebras of differential operators.

Polynomials are dicts from exponent tuples to ``Fraction``. The volume
polynomial of a ring R is V(c) = <(c_1 x_1 + ... + c_m x_m)^n, [M]> / n!,
and D -> D V identifies H^* with the quotient of the operator algebra by
the annihilator of V.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from itertools import product as cartesian
from math import factorial, prod
from typing import Mapping, Sequence

from . import exactalg as ea
from .cohomology import CohomologyRing, DegreeOverflow, NonHomogeneous, _exponents
from .cone import RationalCone

__all__ = [
    "VolumePolynomial",
    "DiffOp",
    "ConditionIVReport",
    "DegreeOverflow",
    "volume_polynomial",
    "apply",
    "directional",
    "algebra_dims",
    "condition_iv_scan",
    "evaluate",
]


def _degree(poly: Mapping) -> int:
    degrees = {sum(e) for e, c in poly.items() if c}
    if len(degrees) > 1:
        raise NonHomogeneous(f"terms of degrees {sorted(degrees)}")
    return degrees.pop() if degrees else 0


def evaluate(poly: Mapping, c: Sequence) -> Fraction:
    c = [Fraction(x) for x in c]
    return sum((k * prod(x**t for x, t in zip(c, e)) for e, k in poly.items()), Fraction(0))


@dataclass(frozen=True)
class VolumePolynomial:
    num_vars: int
    degree: int
    coefficients: dict = field(hash=False)

    def __call__(self, c: Sequence) -> Fraction:
        return evaluate(self.coefficients, c)


@dataclass(frozen=True)
class DiffOp:
    """A homogeneous polynomial in the partial derivatives d_1, ..., d_m."""

    num_vars: int
    coefficients: dict = field(hash=False)

    @property
    def degree(self) -> int:
        return _degree(self.coefficients)

    @classmethod
    def identity(cls, m: int) -> "DiffOp":
        return cls(m, {(0,) * m: Fraction(1)})

    @classmethod
    def monomial(cls, e: Sequence[int]) -> "DiffOp":
        return cls(len(e), {tuple(e): Fraction(1)})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "DiffOp":
        m = len(coeffs)
        return cls(m, {tuple(int(i == j) for j in range(m)): Fraction(c) for i, c in enumerate(coeffs) if c})

    def __add__(self, other: "DiffOp") -> "DiffOp":
        out = dict(self.coefficients)
        for e, c in other.coefficients.items():
            out[e] = out.get(e, 0) + c
        return DiffOp(self.num_vars, {e: c for e, c in out.items() if c})

    def scale(self, k) -> "DiffOp":
        k = Fraction(k)
        return DiffOp(self.num_vars, {e: k * c for e, c in self.coefficients.items() if k * c})


def volume_polynomial(R: CohomologyRing) -> VolumePolynomial:
    """V with n! V(c) = <(sum c_i x_i)^n, [M]> exactly."""
    n, m = R.n, R.m
    coeffs = {}
    for e in _exponents(m, n):
        mono = tuple(j + 1 for j, t in enumerate(e) for _ in range(t))
        val = R.integrate(R.reduce({mono: 1})) if n else Fraction(1)
        if val:
            multi = factorial(n) // prod(factorial(t) for t in e)
            coeffs[e] = Fraction(multi) * val / factorial(n)
    return VolumePolynomial(m, n, coeffs)


def _differentiate(poly: Mapping, e: Sequence[int]) -> dict:
    out: dict = {}
    for f, c in poly.items():
        if any(a < b for a, b in zip(f, e)):
            continue
        k = c
        for a, b in zip(f, e):
            for t in range(b):
                k *= a - t
        g = tuple(a - b for a, b in zip(f, e))
        out[g] = out.get(g, 0) + k
    return {g: c for g, c in out.items() if c}


def apply(D: DiffOp, V) -> dict:
    """The polynomial D V; ``V`` is a VolumePolynomial or a coefficient dict."""
    poly = V.coefficients if isinstance(V, VolumePolynomial) else V
    deg_v = V.degree if isinstance(V, VolumePolynomial) else _degree(poly)
    if D.degree > deg_v:
        raise DegreeOverflow(f"operator of degree {D.degree} applied to degree {deg_v}")
    out: dict = {}
    for e, c in D.coefficients.items():
        for g, k in _differentiate(poly, e).items():
            out[g] = out.get(g, 0) + c * k
    return {g: c for g, c in out.items() if c}


def directional(c: Sequence, d: int) -> DiffOp:
    """(c_1 d_1 + ... + c_m d_m)^d."""
    m = len(c)
    c = [Fraction(x) for x in c]
    out = {}
    for e in _exponents(m, d):
        k = Fraction(factorial(d), prod(factorial(t) for t in e)) * prod(x**t for x, t in zip(c, e))
        if k:
            out[e] = k
    return DiffOp(m, out)


def _image_matrix(V: VolumePolynomial, k: int):
    """Rows: coefficient vectors of d^e V over degree-(n-k) monomials, for |e| = k."""
    ops = _exponents(V.num_vars, k)
    targets = _exponents(V.num_vars, V.degree - k)
    col = {g: i for i, g in enumerate(targets)}
    rows = []
    for e in ops:
        row = [Fraction(0)] * len(targets)
        for g, c in _differentiate(V.coefficients, e).items():
            row[col[g]] = c
        rows.append(row)
    return ops, targets, rows


def algebra_dims(V: VolumePolynomial) -> tuple[int, ...]:
    """Ranks of the catalecticant maps D -> D V in every degree."""
    return tuple(ea.rank(_image_matrix(V, k)[2]) for k in range(V.degree + 1))


def _gram(poly: Mapping, m: int):
    """Symmetric matrix of a quadratic form."""
    G = [[Fraction(0)] * m for _ in range(m)]
    for e, c in poly.items():
        idx = [i for i, t in enumerate(e) for _ in range(t)]
        i, j = idx
        if i == j:
            G[i][i] += c
        else:
            G[i][j] += c / 2
            G[j][i] += c / 2
    return G


@dataclass(frozen=True)
class ConditionIVReport:
    """Quadratic slice of the sign condition on D V.

    ``verdict`` is ``"holds"`` when no nonzero D V of degree 2 is
    semidefinite, ``"fails"`` with a witness operator otherwise, and
    ``"undecided"`` when neither could be established.
    """

    verdict: str
    basis: tuple
    witness: DiffOp | None = None
    witness_inertia: ea.Inertia | None = None
    cone_generators: int | None = None
    extra: tuple = ()


def _basis_ops(V: VolumePolynomial, k: int) -> list[tuple[int, ...]]:
    # prefer operators in the later variables, scanning lexicographically from the end
    ops, _, rows = _image_matrix(V, k)
    order = sorted(range(len(ops)), key=lambda i: ops[i][::-1], reverse=True)
    chosen: list[int] = []
    for i in order:
        if ea.rank([rows[j] for j in chosen] + [rows[i]]) > len(chosen):
            chosen.append(i)
    return [ops[i] for i in sorted(chosen, key=lambda i: ops[i][::-1], reverse=True)]


def _grid_signs(poly: Mapping, m: int, radius: int = 1) -> str:
    pos = neg = False
    for c in cartesian(range(-radius, radius + 1), repeat=m):
        v = evaluate(poly, c)
        pos |= v > 0
        neg |= v < 0
        if pos and neg:
            return "indefinite"
    if pos:
        return "nonnegative-on-grid"
    if neg:
        return "nonpositive-on-grid"
    return "zero-on-grid"


def condition_iv_scan(
    V: VolumePolynomial,
    witness_ops: Sequence[DiffOp] | None = None,
    radius: int = 1,
    max_grid: int = 3**10,
) -> ConditionIVReport:
    """Look for degree n-2 operators D with D V nonzero and semidefinite.

    Combinations of a basis of A_{n-2} with coefficients in [-radius, radius]
    are tried first. If none is semidefinite, the cone spanned by the images
    of (a . grad)^2 V, a in {-1,0,1}^m, is computed: when it fills A_2 no
    nonzero semidefinite D V exists.
    """
    n, m = V.degree, V.num_vars
    extra = tuple((D, _grid_signs(apply(D, V), m)) for D in (witness_ops or ()))
    if n < 2:
        return ConditionIVReport("holds", (), extra=extra)
    basis = _basis_ops(V, n - 2)
    images = [apply(DiffOp.monomial(e), V) for e in basis]
    for t in cartesian(range(-radius, radius + 1), repeat=len(basis)):
        nz = [x for x in t if x]
        if not nz or nz[0] < 0:
            continue
        q: dict = {}
        for x, img in zip(t, images):
            if x:
                for g, c in img.items():
                    q[g] = q.get(g, 0) + x * c
        q = {g: c for g, c in q.items() if c}
        if not q:
            continue
        inert = ea.inertia(_gram(q, m))
        if inert.p == 0 or inert.q == 0:
            D = DiffOp(m, {e: Fraction(x) for e, x in zip(basis, t) if x})
            return ConditionIVReport("fails", tuple(basis), D, inert, extra=extra)
    if 3**m > max_grid:
        return ConditionIVReport("undecided", tuple(basis), extra=extra)
    # images of squares in degree n-2 polynomial coordinates
    _, targets, _ = _image_matrix(V, 2)
    col = {g: i for i, g in enumerate(targets)}
    table = {}
    for i, j in combinations_with_replacement(range(m), 2):
        e = [0] * m
        e[i] += 1
        e[j] += 1
        row = [Fraction(0)] * len(targets)
        for g, c in _differentiate(V.coefficients, e).items():
            row[col[g]] = c
        table[i, j] = row
    gens = set()
    for a in cartesian((-1, 0, 1), repeat=m):
        nz = [i for i, c in enumerate(a) if c]
        if not nz or a[nz[0]] < 0:
            continue
        v = [Fraction(0)] * len(targets)
        for x, i in enumerate(nz):
            for j in nz[x:]:
                k = a[i] * a[j] * (1 if i == j else 2)
                for s, y in enumerate(table[i, j]):
                    if y:
                        v[s] += k * y
        gens.add(ea.primitive(v))
    cone = RationalCone(len(targets), gens)
    verdict = "holds" if not cone.facet_normals() else "undecided"
    return ConditionIVReport(verdict, tuple(basis), cone_generators=len(cone.generators), extra=extra)
