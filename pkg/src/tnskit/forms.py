"""The forms Q_a(x) = <a x^k, [M]> on H^2 and their classification."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from itertools import product as cartesian
from math import factorial, prod
from typing import Iterator, Sequence

from . import exactalg as ea
from .exactalg import DimensionMismatch
from .cohomology import CohClass, CohomologyRing, DegreeMismatch, _exponents, _pmul

__all__ = [
    "ZERO",
    "ADMISSIBLE",
    "PSD",
    "NSD",
    "UNKNOWN",
    "DimensionMismatch",
    "FormReport",
    "form_Qa",
    "intersection_form",
    "quadratic_family_scan",
    "iter_quadratic_family",
    "spiral",
    "evaluate",
]

ZERO = "zero"
ADMISSIBLE = "admissible"
PSD = "positive-semidefinite"
NSD = "negative-semidefinite"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class FormReport:
    """Q_a in coordinates of the ring's H^2 basis.

    ``coefficients`` maps exponent tuples over that basis to rationals. For
    quadratic forms ``matrix`` is the symmetric Gram matrix and ``inertia``
    its exact inertia.
    """

    a: CohClass
    k: int
    coefficients: dict = field(compare=False)
    classification: str
    matrix: tuple | None = None
    inertia: ea.Inertia | None = None
    witnesses: tuple | None = None

    def value(self, x: Sequence) -> Fraction:
        return evaluate(self.coefficients, x)


def evaluate(coefficients: dict, x: Sequence) -> Fraction:
    total = Fraction(0)
    for e, c in coefficients.items():
        total += c * prod(Fraction(xi) ** ei for xi, ei in zip(x, e))
    return total


def spiral(r: int, radius: int) -> Iterator[tuple[int, ...]]:
    """Nonzero lattice points of Z^r by increasing max-norm, then lexicographically."""
    for level in range(1, radius + 1):
        for x in cartesian(range(-level, level + 1), repeat=r):
            if max(abs(t) for t in x) == level:
                yield x


def _free_index(R: CohomologyRing) -> list[int]:
    """Position in the free-variable tuple of each H^2 basis element."""
    return [R.free.index(mono[0]) for mono in R.basis[1]]


def _table(R: CohomologyRing, k: int) -> dict:
    """table[e] = the row of integrals <b_l * x^e> over the degree-(n-k) basis b_l."""
    cache = R.__dict__.setdefault("_form_tables", {})
    if k in cache:
        return cache[k]
    pos = _free_index(R)
    d = R.n - k
    basis = [R.lift(R.basis_class(d, l)) for l in range(len(R.basis[d]))]
    out = {}
    for e in _exponents(len(pos), k):
        free_e = [0] * R.r
        for i, a in enumerate(e):
            free_e[pos[i]] += a
        mono = {tuple(free_e): Fraction(1)}
        out[e] = tuple(R.integrate_free(_pmul(b, mono)) for b in basis)
    cache[k] = out
    return out


def _multinomial(e: Sequence[int]) -> int:
    return factorial(sum(e)) // prod(factorial(x) for x in e)


def form_Qa(R: CohomologyRing, a: CohClass, k: int, search_radius: int = 2) -> FormReport:
    """Q_a(x) = <a x^k, [M]> for deg a = n - k."""
    if not 0 < k <= R.n or a.degree != R.n - k:
        raise DegreeMismatch(f"need deg a = {R.n - k} and 0 < k <= {R.n}")
    table = _table(R, k)
    coeffs = {}
    vals = {}
    for e, row in table.items():
        val = sum((x * y for x, y in zip(a.coords, row) if x), Fraction(0))
        vals[e] = val
        if val:
            coeffs[e] = _multinomial(e) * val
    r = len(R.basis[1])
    if k == 2:
        M = [[Fraction(0)] * r for _ in range(r)]
        for e, val in vals.items():
            i, j = (i for i, t in enumerate(e) for _ in range(t))
            M[i][j] = M[j][i] = val
        M = tuple(tuple(row) for row in M)
        D, P, inert = ea.congruence_diagonalize(M)
        if inert.rank == 0:
            cls, wit = ZERO, None
        elif inert.p and inert.q:
            cls = ADMISSIBLE
            pos = next(i for i in range(r) if D[i][i] > 0)
            neg = next(i for i in range(r) if D[i][i] < 0)
            wit = (
                ea.primitive([P[t][pos] for t in range(r)]),
                ea.primitive([P[t][neg] for t in range(r)]),
            )
        else:
            cls, wit = (PSD if inert.p else NSD), None
        return FormReport(a, k, coeffs, cls, M, inert, wit)
    if not coeffs:
        return FormReport(a, k, coeffs, ZERO)
    pos = neg = None
    for x in spiral(r, search_radius):
        v = evaluate(coeffs, x)
        if v > 0 and pos is None:
            pos = x
        elif v < 0 and neg is None:
            neg = x
        if pos is not None and neg is not None:
            return FormReport(a, k, coeffs, ADMISSIBLE, witnesses=(pos, neg))
    # a sum of even monomials with one sign is semidefinite
    if all(all(t % 2 == 0 for t in e) for e in coeffs):
        signs = {c > 0 for c in coeffs.values()}
        if signs == {True}:
            return FormReport(a, k, coeffs, PSD)
        if signs == {False}:
            return FormReport(a, k, coeffs, NSD)
    return FormReport(a, k, coeffs, UNKNOWN)


def intersection_form(R: CohomologyRing) -> FormReport:
    if R.n != 2:
        raise DimensionMismatch(f"intersection form needs n = 2, got {R.n}")
    return form_Qa(R, R.one(), 2)


def _coefficient_grid(dim: int, radius: int) -> Iterator[tuple[int, ...]]:
    """Nonzero integer vectors with entries in [-radius, radius] whose first
    nonzero entry is positive, sparsest first."""
    values = [v for v in range(-radius, radius + 1) if v]
    for size in range(1, dim + 1):
        for support in combinations(range(dim), size):
            for vals in cartesian(values, repeat=size):
                if vals[0] < 0:
                    continue
                coords = [0] * dim
                for i, v in zip(support, vals):
                    coords[i] = v
                yield tuple(coords)


def iter_quadratic_family(R: CohomologyRing, k_codim: int, radius: int = 1) -> Iterator[FormReport]:
    """Lazy version of :func:`quadratic_family_scan`."""
    if not 0 < 2 * k_codim <= R.n:
        raise DegreeMismatch(f"need 0 < 2k <= {R.n}")
    d = R.n - 2 * k_codim
    for coords in _coefficient_grid(len(R.basis[d]), radius):
        a = CohClass(d, tuple(Fraction(c) for c in coords))
        yield form_Qa(R, a, 2 * k_codim)


def quadratic_family_scan(R: CohomologyRing, k_codim: int, radius: int = 1) -> list[FormReport]:
    """Q_a of degree 2k for every nonzero integer a in H^{2(n-2k)} with
    coordinates in [-radius, radius], one representative per sign pair,
    sparsest a first."""
    return list(iter_quadratic_family(R, k_codim, radius))
