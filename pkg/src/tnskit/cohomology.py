"""Rational cohomology ring of a quasitoric manifold.

The ring is Q[x_1..x_m] modulo the Stanley-Reisner ideal and the linear
relations given by the rows of Lambda. The variables of one vertex are
eliminated through the (unimodular) vertex block, which leaves a polynomial
ring in the remaining m - n variables; each graded piece is then a quotient
of a finite-dimensional space computed by exact row reduction.

Polynomials in x_1..x_m are dicts from sorted facet-index tuples (monomials
as multisets) to coefficients, e.g. ``{(1, 2): 1, (3, 3): -2}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import prod
from typing import Mapping, Sequence

from . import exactalg as ea
from .charpair import CharacteristicPair, vertex_sign
from .polytope import minimal_missing_faces

__all__ = [
    "CohomologyError",
    "NonHomogeneous",
    "DegreeOverflow",
    "DegreeMismatch",
    "CohClass",
    "CohomologyRing",
    "build_ring",
    "monomial",
    "polynomial",
]


class CohomologyError(ValueError):
    pass


class NonHomogeneous(CohomologyError):
    pass


class DegreeOverflow(CohomologyError):
    pass


class DegreeMismatch(CohomologyError):
    pass


@dataclass(frozen=True)
class CohClass:
    """A class in H^{2k}, given by coordinates in the ring's degree-k basis."""

    degree: int
    coords: tuple[Fraction, ...]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __add__(self, other: "CohClass") -> "CohClass":
        if self.degree != other.degree:
            raise DegreeMismatch("cannot add classes of different degrees")
        return CohClass(self.degree, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "CohClass":
        return CohClass(self.degree, tuple(-c for c in self.coords))

    def __sub__(self, other: "CohClass") -> "CohClass":
        return self + (-other)

    def scale(self, c) -> "CohClass":
        c = Fraction(c)
        return CohClass(self.degree, tuple(c * x for x in self.coords))


# Free-variable polynomials: dict from exponent tuples (length r) to Fraction.

def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea_, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea_, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c != 0}


def _padd(a: dict, b: dict, scale=1) -> dict:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + scale * c
    return {e: c for e, c in out.items() if c != 0}


def _ppow(a: dict, k: int, r: int) -> dict:
    out = {(0,) * r: Fraction(1)}
    for _ in range(k):
        out = _pmul(out, a)
    return out


def _exponents(r: int, k: int) -> list[tuple[int, ...]]:
    out = []
    for combo in combinations_with_replacement(range(r), k):
        e = [0] * r
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


class CohomologyRing:
    """Graded ring H^*(M; Q) with a fixed monomial basis in every degree.

    Attributes of interest: ``n``, ``m``, ``eliminated`` (the vertex whose
    variables were solved for), ``free`` (surviving variables, increasing)
    and ``basis[k]`` (monomials as sorted facet tuples).
    """

    def __init__(self, cp: CharacteristicPair):
        self.source = cp
        n, m = cp.dim, cp.num_facets
        self.n, self.m = n, m
        verts = cp.polytope.vertices
        self.v0 = min(range(len(verts)), key=lambda k: tuple(sorted(verts[k])))
        self.eliminated = tuple(sorted(verts[self.v0]))
        self.free = tuple(j for j in range(1, m + 1) if j not in self.eliminated)
        r = len(self.free)
        self.r = r
        # x_j as a linear form in the free variables
        B = ea.transpose([cp.column(j) for j in self.eliminated])
        C = ea.transpose([cp.column(j) for j in self.free]) if r else tuple(() for _ in range(n))
        sol = ea.matmul(ea.inverse(B), C) if r else tuple(() for _ in range(n))
        self._linear: dict[int, dict] = {}
        for k, j in enumerate(self.free):
            e = [0] * r
            e[k] = 1
            self._linear[j] = {tuple(e): Fraction(1)}
        for row, j in enumerate(self.eliminated):
            form = {}
            for k in range(r):
                c = -Fraction(sol[row][k])
                if c:
                    e = [0] * r
                    e[k] = 1
                    form[tuple(e)] = c
            self._linear[j] = form
        self.missing_faces = tuple(minimal_missing_faces(cp.polytope))
        self._missing_polys = [self._substitute_monomial(S) for S in self.missing_faces]
        self._monomials: list[list[tuple[int, ...]]] = []
        self._column: list[dict] = []
        self._pivot_rows: list[list[tuple[int, list[Fraction]]]] = []
        self._basis_cols: list[list[int]] = []
        self.basis: list[tuple[tuple[int, ...], ...]] = []
        for k in range(n + 1):
            self._build_degree(k)
        self._top = self._normalize()

    # -- construction ----------------------------------------------------
    def _substitute_monomial(self, facets: Sequence[int]) -> dict:
        out = {(0,) * self.r: Fraction(1)}
        for j in facets:
            out = _pmul(out, self._linear[j])
        return out

    def _key(self, e: tuple[int, ...]):
        # monomial as its facet indices in decreasing order; larger keys are
        # preferred as basis elements
        return tuple(sorted((self.free[i] for i, a in enumerate(e) for _ in range(a)), reverse=True))

    def _build_degree(self, k: int):
        mons = sorted(_exponents(self.r, k), key=self._key)
        col = {e: i for i, e in enumerate(mons)}
        gens = []
        for S, poly in zip(self.missing_faces, self._missing_polys):
            if len(S) > k:
                continue
            for mu in _exponents(self.r, k - len(S)):
                p = _pmul(poly, {mu: Fraction(1)})
                v = [Fraction(0)] * len(mons)
                for e, c in p.items():
                    v[col[e]] = c
                gens.append(v)
        pivots: list[tuple[int, list[Fraction]]] = []
        if gens:
            R, piv = ea.rref(gens)
            pivots = [(p, list(R[i])) for i, p in enumerate(piv)]
        pivset = {p for p, _ in pivots}
        basis_cols = [i for i in range(len(mons)) if i not in pivset]
        basis_cols.sort(key=lambda i: self._key(mons[i]), reverse=True)
        self._monomials.append(mons)
        self._column.append(col)
        self._pivot_rows.append(pivots)
        self._basis_cols.append(basis_cols)
        self.basis.append(tuple(self._facets_of(mons[i]) for i in basis_cols))

    def _facets_of(self, e: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(self.free[i] for i, a in enumerate(e) for _ in range(a))

    def _normalize(self) -> Fraction:
        """Value of the top basis monomial on the fundamental class."""
        if len(self.basis[self.n]) != 1:
            raise CohomologyError(f"top degree has dimension {len(self.basis[self.n])}, expected 1")
        cp = self.source
        values = []
        for v, t in enumerate(cp.polytope.vertices):
            c = self._reduce_free(self._substitute_monomial(t), self.n).coords[0]
            if c == 0:
                raise CohomologyError(f"vertex monomial {t} vanishes in top degree")
            values.append(Fraction(vertex_sign(cp, v)) / c)
        if len(set(values)) != 1:
            raise CohomologyError("vertex normalization is inconsistent")
        return values[0]

    # -- queries ---------------------------------------------------------
    def dims(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.basis)

    def _reduce_free(self, poly: dict, k: int) -> CohClass:
        mons = self._monomials[k]
        col = self._column[k]
        v = [Fraction(0)] * len(mons)
        for e, c in poly.items():
            if sum(e) != k:
                raise NonHomogeneous("polynomial is not homogeneous")
            v[col[e]] += c
        for p, row in self._pivot_rows[k]:
            if v[p]:
                f = v[p]
                v = [a - f * b for a, b in zip(v, row)]
        return CohClass(k, tuple(v[i] for i in self._basis_cols[k]))

    def to_free(self, poly: Mapping[Sequence[int], object]) -> dict:
        """Substitute the linear relations into a polynomial in x_1..x_m."""
        out: dict = {}
        for mono, c in poly.items():
            c = Fraction(c)
            if c:
                out = _padd(out, self._substitute_monomial(tuple(mono)), c)
        return out

    def reduce(self, poly: Mapping[Sequence[int], object]) -> CohClass:
        degrees = {len(tuple(mono)) for mono, c in poly.items() if Fraction(c) != 0}
        if not degrees:
            # the zero polynomial keeps the degree of its (zero) terms
            degrees = {len(tuple(mono)) for mono in poly} or {0}
        if len(degrees) > 1:
            raise NonHomogeneous(f"monomials of degrees {sorted(degrees)}")
        k = degrees.pop() if degrees else 0
        if k > self.n:
            return self.zero(k)
        return self._reduce_free(self.to_free(poly), k)

    def zero(self, k: int) -> CohClass:
        dim = len(self.basis[k]) if k <= self.n else 0
        return CohClass(k, (Fraction(0),) * dim)

    def one(self) -> CohClass:
        return CohClass(0, (Fraction(1),))

    def generator(self, j: int) -> CohClass:
        """The class of x_j."""
        return self.reduce({(j,): 1})

    def linear(self, coeffs: Sequence) -> CohClass:
        """The class of sum_j coeffs[j-1] x_j."""
        if len(coeffs) != self.m:
            raise CohomologyError(f"expected {self.m} coefficients")
        return self.reduce({(j + 1,): c for j, c in enumerate(coeffs)})

    def basis_class(self, k: int, i: int) -> CohClass:
        coords = [Fraction(0)] * len(self.basis[k])
        coords[i] = Fraction(1)
        return CohClass(k, tuple(coords))

    def lift(self, a: CohClass) -> dict:
        """A free-variable polynomial representing ``a``."""
        mons = self._monomials[a.degree]
        out = {}
        for c, i in zip(a.coords, self._basis_cols[a.degree]):
            if c:
                out[mons[i]] = c
        return out

    def as_polynomial(self, a: CohClass) -> dict:
        """``a`` as a combination of its basis monomials in x_1..x_m."""
        return {mono: c for mono, c in zip(self.basis[a.degree], a.coords) if c}

    def multiply(self, a: CohClass, b: CohClass) -> CohClass:
        k = a.degree + b.degree
        if k > self.n:
            raise DegreeOverflow(f"degree {k} exceeds {self.n}")
        return self._reduce_free(_pmul(self.lift(a), self.lift(b)), k)

    def power(self, a: CohClass, e: int) -> CohClass:
        if a.degree * e > self.n:
            raise DegreeOverflow(f"degree {a.degree * e} exceeds {self.n}")
        return self._reduce_free(_ppow(self.lift(a), e, self.r), a.degree * e)

    def integrate(self, a: CohClass) -> Fraction:
        if a.degree != self.n:
            raise DegreeMismatch(f"can only integrate degree {self.n}, got {a.degree}")
        return a.coords[0] * self._top

    def integrate_free(self, poly: dict) -> Fraction:
        """Integral of a homogeneous degree-n polynomial in the free variables."""
        return self.integrate(self._reduce_free(poly, self.n)) if poly else Fraction(0)

    def free_linear(self, coeffs: Sequence) -> dict:
        """The free-variable polynomial sum_i coeffs[i] x_{free[i]}."""
        out = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * self.r
                e[i] = 1
                out[tuple(e)] = Fraction(c)
        return out

    def pairing_matrix(self, k: int) -> tuple[tuple[Fraction, ...], ...]:
        if not 0 <= k <= self.n:
            raise DegreeMismatch(f"degree {k} outside 0..{self.n}")
        left = [self.basis_class(k, i) for i in range(len(self.basis[k]))]
        right = [self.basis_class(self.n - k, j) for j in range(len(self.basis[self.n - k]))]
        return tuple(tuple(self.integrate(self.multiply(a, b)) for b in right) for a in left)


def build_ring(cp: CharacteristicPair) -> CohomologyRing:
    return CohomologyRing(cp)


def monomial(*facets: int) -> dict:
    """Polynomial dict for the monomial x_{facets[0]} * x_{facets[1]} * ..."""
    return {tuple(sorted(facets)): 1}


def polynomial(poly_terms: Sequence[tuple[object, Sequence[int]]]) -> dict:
    """Polynomial dict from (coefficient, facets) pairs."""
    out: dict = {}
    for c, facets in poly_terms:
        key = tuple(sorted(facets))
        out[key] = out.get(key, 0) + c
    return out


def multinomial(e: Sequence[int]) -> int:
    from math import factorial

    return factorial(sum(e)) // prod(factorial(x) for x in e)
