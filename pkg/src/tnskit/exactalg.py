"""Exact integer and rational linear algebra.

Matrices are plain tuples of row tuples holding ``int`` or
``fractions.Fraction`` entries. Nothing here ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import NamedTuple, Sequence

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp

__all__ = [
    "Inertia",
    "NonSymmetric",
    "DimensionMismatch",
    "as_int_matrix",
    "as_rat_matrix",
    "identity",
    "transpose",
    "matmul",
    "matvec",
    "det",
    "rank",
    "rref",
    "nullspace",
    "inverse",
    "solve",
    "is_unimodular",
    "primitive",
    "smith_normal_form",
    "hermite_normal_form",
    "glz_normal_form",
    "integer_kernel",
    "congruence_diagonalize",
    "inertia",
    "unimodular_completion",
]


class NonSymmetric(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class Inertia(NamedTuple):
    """Counts of positive, negative and zero directions of a quadratic form."""

    p: int
    q: int
    z: int

    @property
    def signature(self) -> int:
        return self.p - self.q

    @property
    def rank(self) -> int:
        return self.p + self.q


def as_int_matrix(rows) -> tuple[tuple[int, ...], ...]:
    out = tuple(tuple(int(x) for x in row) for row in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged matrix")
    return out


def as_rat_matrix(rows) -> tuple[tuple[Fraction, ...], ...]:
    out = tuple(tuple(Fraction(x) for x in row) for row in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged matrix")
    return out


def identity(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(A):
    return tuple(zip(*A)) if A else ()


def matmul(A, B):
    Bt = transpose(B)
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def matvec(A, v):
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def det(A) -> int | Fraction:
    """Determinant by fraction-free Bareiss elimination (exact)."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(row) for row in A]
    if any(len(r) != n for r in M):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                M[i][j] = num / prev if isinstance(num, Fraction) or isinstance(prev, Fraction) else num // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rref(A):
    """Reduced row echelon form over Q.

    Returns ``(R, pivots)`` where ``R`` holds only the nonzero rows.
    """
    M = [[Fraction(x) for x in row] for row in A]
    ncols = len(M[0]) if M else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return tuple(tuple(row) for row in M[:r]), tuple(pivots)


def rank(A) -> int:
    if not A or not A[0]:
        return 0
    # fraction-free elimination on integer input is much faster than rref
    if all(isinstance(x, int) for row in A for x in row):
        M = [list(row) for row in A]
        ncols = len(M[0])
        r = 0
        for c in range(ncols):
            piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
            if piv is None:
                continue
            M[r], M[piv] = M[piv], M[r]
            p = M[r][c]
            for i in range(r + 1, len(M)):
                f = M[i][c]
                if f:
                    row = [p * a - f * b for a, b in zip(M[i], M[r])]
                    g = 0
                    for x in row:
                        g = gcd(g, x)
                    M[i] = [x // g for x in row] if g > 1 else row
            r += 1
            if r == len(M):
                break
        return r
    return len(rref(A)[1])


def nullspace(A, ncols: int | None = None) -> tuple[tuple[Fraction, ...], ...]:
    """Rational basis of ``{x : A x = 0}``."""
    if ncols is None:
        ncols = len(A[0]) if A else 0
    if not A:
        return tuple(tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols))
    R, pivots = rref(A)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return tuple(basis)


def inverse(A):
    n = len(A)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if tuple(pivots[:n]) != tuple(range(n)) or len(R) < n:
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(row[n:]) for row in R)


def solve(A, b):
    """One rational solution of ``A x = b`` or ``None`` if inconsistent."""
    ncols = len(A[0])
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(R, pivots):
        x[p] = row[ncols]
    return tuple(x)


def is_unimodular(A) -> bool:
    return len(A) > 0 and len(A) == len(A[0]) and abs(det(A)) == 1


def primitive(v) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def smith_normal_form(A):
    """Smith normal form ``S = U A V`` with unimodular ``U`` and ``V``.

    The diagonal of ``S`` is non-negative and each entry divides the next.
    """
    A = as_int_matrix(A)
    rows = len(A)
    cols = len(A[0]) if A else 0
    if rows == 0 or cols == 0:
        return A, identity(rows), identity(cols)
    S, U, V = smith_normal_decomp(Matrix(A))
    S = [[int(x) for x in S.row(i)] for i in range(rows)]
    U = [[int(x) for x in U.row(i)] for i in range(rows)]
    # sympy may leave negative invariant factors; flip the row in U to fix
    for i in range(min(rows, cols)):
        if S[i][i] < 0:
            S[i][i] = -S[i][i]
            U[i] = [-x for x in U[i]]
    V = [[int(x) for x in V.row(i)] for i in range(cols)]
    return as_int_matrix(S), as_int_matrix(U), as_int_matrix(V)


def hermite_normal_form(A):
    """Row-style Hermite normal form ``N = U A`` with ``U`` unimodular.

    ``N`` is in row echelon form, pivots are positive, entries above a pivot
    lie in ``[0, pivot)`` and zero rows sit at the bottom. It is the unique
    representative of the orbit of ``A`` under left multiplication by
    ``GL_n(Z)``.
    """
    A = as_int_matrix(A)
    n = len(A)
    m = len(A[0]) if A else 0
    N = [list(row) for row in A]
    U = [list(row) for row in identity(n)]

    def combine(i, j, c):
        # row_i += c * row_j
        N[i] = [a + c * b for a, b in zip(N[i], N[j])]
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]

    r = 0
    for c in range(m):
        if r == n:
            break
        while True:
            nz = [i for i in range(r, n) if N[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(N[i][c]))
            N[r], N[piv] = N[piv], N[r]
            U[r], U[piv] = U[piv], U[r]
            done = True
            for i in range(r + 1, n):
                if N[i][c] != 0:
                    combine(i, r, -(N[i][c] // N[r][c]))
                    if N[i][c] != 0:
                        done = False
            if done:
                break
        if all(N[i][c] == 0 for i in range(r, n)):
            continue
        if N[r][c] < 0:
            N[r] = [-x for x in N[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            combine(i, r, -(N[i][c] // N[r][c]))
        r += 1
    return as_int_matrix(N), as_int_matrix(U)


def glz_normal_form(A):
    """Canonical representative of the left ``GL_n(Z)`` orbit of ``A``.

    Returns ``(N, U)`` with ``N = U A``; two matrices are left-equivalent
    exactly when their normal forms coincide.
    """
    return hermite_normal_form(A)


def integer_kernel(A) -> tuple[tuple[int, ...], ...]:
    """Lattice basis of ``{v in Z^cols : A v = 0}``."""
    A = as_int_matrix(A)
    cols = len(A[0]) if A else 0
    if not A:
        return identity(cols)
    S, _, V = smith_normal_form(A)
    r = sum(1 for i in range(min(len(S), cols)) if S[i][i] != 0)
    return tuple(tuple(V[i][j] for i in range(cols)) for j in range(r, cols))


def congruence_diagonalize(Q):
    """Diagonalize a symmetric rational matrix by congruence.

    Returns ``(D, P, inertia)`` with ``P^T Q P = D`` exactly, ``D`` diagonal.
    A zero pivot with a nonzero off-diagonal entry is handled by replacing
    the basis vector ``e_i`` with ``e_i + e_j``.
    """
    Q = as_rat_matrix(Q)
    n = len(Q)
    if any(Q[i][j] != Q[j][i] for i in range(n) for j in range(n)):
        raise NonSymmetric("matrix is not symmetric")
    A = [list(row) for row in Q]
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def col_add(j, i, c):
        # e_j <- e_j + c e_i, applied as a congruence
        for k in range(n):
            A[k][j] += c * A[k][i]
        for k in range(n):
            A[j][k] += c * A[i][k]
        for k in range(n):
            P[k][j] += c * P[k][i]

    def swap(i, j):
        A[i], A[j] = A[j], A[i]
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in P:
            row[i], row[j] = row[j], row[i]

    for i in range(n):
        if A[i][i] == 0:
            j = next((j for j in range(i + 1, n) if A[j][j] != 0), None)
            if j is not None:
                swap(i, j)
            else:
                j = next((j for j in range(i + 1, n) if A[i][j] != 0), None)
                if j is None:
                    continue
                col_add(i, j, Fraction(1))
        piv = A[i][i]
        for j in range(i + 1, n):
            if A[i][j] != 0:
                col_add(j, i, -A[i][j] / piv)
    D = tuple(tuple(A[i][j] if i == j else Fraction(0) for j in range(n)) for i in range(n))
    return D, tuple(tuple(row) for row in P), _count_signs(D[i][i] for i in range(n))


def _count_signs(values) -> Inertia:
    p = q = z = 0
    for v in values:
        if v > 0:
            p += 1
        elif v < 0:
            q += 1
        else:
            z += 1
    return Inertia(p, q, z)


def inertia(Q) -> Inertia:
    return congruence_diagonalize(Q)[2]


def unimodular_completion(v: Sequence[int], basis_hint=None):
    """A matrix in ``SL_n(Z)`` whose first column is the primitive vector ``v``.

    ``basis_hint`` may be a unimodular matrix containing ``v`` as a column;
    otherwise one is built from the Smith form of ``v``.
    """
    v = tuple(int(x) for x in v)
    n = len(v)
    if basis_hint is not None:
        cols = [tuple(row[j] for row in basis_hint) for j in range(n)]
        k = cols.index(v)
        cols = [cols[k]] + cols[:k] + cols[k + 1:]
    else:
        # U v = e1 * g with U unimodular, so U^{-1} has v as first column
        S, U, _ = smith_normal_form(tuple((x,) for x in v))
        if S[0][0] != 1:
            raise ValueError("vector is not primitive")
        Uinv = inverse(U)
        cols = [tuple(int(Uinv[i][j]) for i in range(n)) for j in range(n)]
        if cols[0] != v:
            cols[0] = tuple(-x for x in cols[0])
    B = transpose(cols)
    if det(B) < 0:
        if n == 1:
            raise ValueError("no SL_1 completion of a negative vector")
        cols[-1] = tuple(-x for x in cols[-1])
        B = transpose(cols)
    return as_int_matrix(B)
