"""Characteristic pairs (P, Lambda): signs, indices, signature, constructions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from sympy import prime

from . import exactalg as ea
from . import polytope as pt
from .polytope import SimplePolytope

__all__ = [
    "CharacteristicPair",
    "InvalidPair",
    "NonGenericDirection",
    "IncompatibleSigns",
    "UnknownName",
    "validate",
    "vertex_block",
    "vertex_sign",
    "vertex_signs",
    "vertex_index",
    "generic_directions",
    "signature",
    "characteristic_submanifold",
    "product",
    "equivariant_connected_sum",
    "blow_up",
    "change_basis",
    "relabel",
    "split_at_missing_face",
    "builtin",
    "BUILTIN_NAMES",
]


class InvalidPair(ValueError):
    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class NonGenericDirection(ValueError):
    pass


class IncompatibleSigns(ValueError):
    pass


class UnknownName(KeyError):
    pass


@dataclass(frozen=True)
class CharacteristicPair:
    polytope: SimplePolytope
    lam: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "lam", ea.as_int_matrix(self.lam))

    @property
    def dim(self) -> int:
        return self.polytope.dim

    @property
    def num_facets(self) -> int:
        return self.polytope.num_facets

    def column(self, j: int) -> tuple[int, ...]:
        """Characteristic vector of facet ``j`` (1-based)."""
        return tuple(row[j - 1] for row in self.lam)

    def checked(self) -> "CharacteristicPair":
        problems = validate(self)
        if problems:
            raise InvalidPair(problems)
        return self


def validate(cp: CharacteristicPair) -> list[str]:
    """Violations of the characteristic-pair conditions (empty when valid)."""
    n, m = cp.dim, cp.num_facets
    if len(cp.lam) != n or any(len(r) != m for r in cp.lam):
        return [f"characteristic matrix must be {n}x{m}"]
    out = []
    for k, t in enumerate(cp.polytope.vertices):
        d = ea.det(vertex_block(cp, k))
        if d not in (1, -1):
            out.append(f"vertex {k} {list(t)}: determinant {d}, expected +-1")
    return out


def vertex_block(cp: CharacteristicPair, v: int) -> tuple[tuple[int, ...], ...]:
    """n x n matrix whose columns are the vertex's characteristic vectors in tuple order."""
    cols = [cp.column(j) for j in cp.polytope.vertices[v]]
    return ea.transpose(cols)


def vertex_sign(cp: CharacteristicPair, v: int) -> int:
    d = ea.det(vertex_block(cp, v))
    if d not in (1, -1):
        raise InvalidPair([f"vertex {v}: determinant {d}"])
    return int(d) * cp.polytope.vertex_orientation(v)


def vertex_signs(cp: CharacteristicPair) -> tuple[int, ...]:
    return tuple(vertex_sign(cp, v) for v in range(len(cp.polytope.vertices)))


def vertex_index(cp: CharacteristicPair, v: int, nu: Sequence) -> int:
    """Number of negative pairings of ``nu`` with the basis dual to the vertex's columns."""
    # rows of B^{-1} are the dual basis
    coords = ea.matvec(ea.inverse(vertex_block(cp, v)), [Fraction(x) for x in nu])
    if any(c == 0 for c in coords):
        raise NonGenericDirection(f"direction {list(nu)} is degenerate at vertex {v}")
    return sum(1 for c in coords if c < 0)


def generic_directions(n: int, count: int = 50) -> Iterator[tuple[int, ...]]:
    """The fixed sequence (1, t, ..., t^(n-1)) for t = 2, 3, 5, 7, ..."""
    for k in range(1, count + 1):
        t = prime(k)
        yield tuple(t**e for e in range(n))


def signature(cp: CharacteristicPair, nu: Sequence | None = None) -> int:
    signs = vertex_signs(cp)
    candidates = [tuple(nu)] if nu is not None else generic_directions(cp.dim)
    last = None
    for direction in candidates:
        try:
            return sum(
                (-1) ** vertex_index(cp, v, direction) * s for v, s in enumerate(signs)
            )
        except NonGenericDirection as exc:
            last = exc
    raise last


def characteristic_submanifold(cp: CharacteristicPair, i: int) -> CharacteristicPair:
    """The pair of the characteristic submanifold over facet ``i``.

    Fixed-point signs are inherited: each vertex of the facet keeps the sign
    it had in ``cp``.
    """
    P, old = pt.facet_polytope(cp.polytope, i)
    g = ea.inverse(ea.unimodular_completion(cp.column(i)))
    reduced = ea.matmul(g, cp.lam)
    lam = tuple(tuple(int(reduced[r][j - 1]) for j in old) for r in range(1, cp.dim))
    name = f"{cp.name}/F{i}" if cp.name else ""
    return CharacteristicPair(P, lam, name).checked()


def product(cp1: CharacteristicPair, cp2: CharacteristicPair) -> CharacteristicPair:
    P = pt.product(cp1.polytope, cp2.polytope)
    m1, m2 = cp1.num_facets, cp2.num_facets
    lam = [tuple(r) + (0,) * m2 for r in cp1.lam] + [(0,) * m1 + tuple(r) for r in cp2.lam]
    name = f"{cp1.name}x{cp2.name}" if cp1.name and cp2.name else ""
    return CharacteristicPair(P, lam, name).checked()


def equivariant_connected_sum(
    cp1: CharacteristicPair,
    v1: int,
    cp2: CharacteristicPair,
    v2: int,
    matching: Mapping[int, int] | Sequence[int] | None = None,
) -> CharacteristicPair:
    """Connected sum at fixed points of opposite sign.

    Both vertex blocks are moved to the identity by a change of basis and the
    matched columns are glued. The orientation follows ``cp1``: signs of its
    surviving vertices are unchanged.
    """
    s1, s2 = vertex_sign(cp1, v1), vertex_sign(cp2, v2)
    if s1 != -s2:
        raise IncompatibleSigns(
            f"compatible orientation requires opposite vertex signs, got {s1} and {s2}"
        )
    P, qmap = pt.connected_sum(cp1.polytope, v1, cp2.polytope, v2, matching)
    t1 = cp1.polytope.vertices[v1]
    inverse_map = {qmap[j]: j for j in range(1, cp2.num_facets + 1)}
    g1 = ea.inverse(vertex_block(cp1, v1))
    g2 = ea.inverse(ea.transpose([cp2.column(inverse_map[j]) for j in t1]))
    A = ea.matmul(g1, cp1.lam)
    B = ea.matmul(g2, cp2.lam)
    n, m = cp1.dim, P.num_facets
    cols = [None] * m
    for j in range(1, cp1.num_facets + 1):
        cols[j - 1] = tuple(int(A[r][j - 1]) for r in range(n))
    for j in range(1, cp2.num_facets + 1):
        col = tuple(int(B[r][j - 1]) for r in range(n))
        k = qmap[j]
        if k <= cp1.num_facets and cols[k - 1] != col:
            raise pt.InvalidMatching("matched columns disagree after normalization")
        cols[k - 1] = col
    lam = ea.transpose(cols)
    if ea.det(g1) < 0:
        P = P.reversed()
    name = f"{cp1.name}#{cp2.name}" if cp1.name and cp2.name else ""
    out = CharacteristicPair(P, lam, name).checked()
    # both summands keep their signs away from the glued vertices
    expected = sorted(
        [s for k, s in enumerate(vertex_signs(cp1)) if k != v1]
        + [s for k, s in enumerate(vertex_signs(cp2)) if k != v2]
    )
    if sorted(vertex_signs(out)) != expected:
        raise IncompatibleSigns("orientations of the summands do not glue")
    return out


def blow_up(cp: CharacteristicPair, G: Iterable[int]) -> CharacteristicPair:
    """Blow up along the face ``G``; the new facet's vector is the sum over ``G``."""
    G = sorted(set(G))
    P = pt.truncate_face(cp.polytope, G)
    new = tuple(sum(cp.column(j)[r] for j in G) for r in range(cp.dim))
    lam = tuple(tuple(row) + (new[r],) for r, row in enumerate(cp.lam))
    return CharacteristicPair(P, lam, f"bl({cp.name})" if cp.name else "").checked()


def change_basis(cp: CharacteristicPair, g) -> CharacteristicPair:
    """Replace Lambda by g * Lambda for g in GL_n(Z).

    When det g = -1 the orientation is reversed too, so fixed-point signs are
    preserved.
    """
    if not ea.is_unimodular(g):
        raise ValueError("change of basis must be unimodular")
    P = cp.polytope if ea.det(g) > 0 else cp.polytope.reversed()
    lam = tuple(tuple(int(x) for x in r) for r in ea.matmul(g, cp.lam))
    return CharacteristicPair(P, lam, cp.name).checked()


def relabel(cp: CharacteristicPair, perm: Mapping[int, int]) -> CharacteristicPair:
    """Rename facet ``i`` to ``perm[i]`` and permute the columns accordingly."""
    P = pt.relabel(cp.polytope, perm)
    cols = [None] * cp.num_facets
    for i in range(1, cp.num_facets + 1):
        cols[perm[i] - 1] = cp.column(i)
    return CharacteristicPair(P, ea.transpose(cols), cp.name).checked()


def split_at_missing_face(
    cp: CharacteristicPair, S: Sequence[int]
) -> list[tuple[CharacteristicPair, tuple[int, ...]]]:
    """Undo a connected sum along a separating missing face of size n.

    Each returned summand is paired with the original indices of its facets.
    The missing face becomes a vertex of each summand, oriented coherently
    with the rest.
    """
    P = cp.polytope
    S = tuple(sorted(S))
    if len(S) != cp.dim or pt.face_nonempty(P, S):
        raise ValueError(f"{list(S)} is not a missing face of size {cp.dim}")
    rest = sorted(set(range(1, P.num_facets + 1)) - set(S))
    adj = {j: set() for j in rest}
    for t in P.vertices:
        inside = [j for j in t if j in adj]
        for a in inside:
            adj[a].update(b for b in inside if b != a)
    components = []
    seen: set[int] = set()
    for j in rest:
        if j in seen:
            continue
        comp, stack = {j}, [j]
        while stack:
            for b in adj[stack.pop()]:
                if b not in comp:
                    comp.add(b)
                    stack.append(b)
        seen |= comp
        components.append(sorted(comp))
    if len(components) != 2:
        raise ValueError(f"{list(S)} does not separate the polytope")
    out = []
    for comp in components:
        old = tuple(sorted(set(S) | set(comp)))
        idx = {j: k + 1 for k, j in enumerate(old)}
        verts = [tuple(idx[j] for j in t) for t in P.vertices if set(t) <= set(old)]
        base = tuple(idx[j] for j in S)
        summand = None
        for corner in (base, (base[1], base[0]) + base[2:]):
            try:
                summand = SimplePolytope(cp.dim, len(old), (corner,) + tuple(verts))
                break
            except pt.InvalidPolytope:
                continue
        if summand is None:
            raise ValueError("summand is not a simple polytope")
        lam = ea.transpose([cp.column(j) for j in old])
        out.append((CharacteristicPair(summand, lam).checked(), old))
    return out


# -- builtins ---------------------------------------------------------------

def _toric(dim: int, vertex_sets: Iterable[Iterable[int]], lam, name: str) -> CharacteristicPair:
    """Order each vertex so its determinant is positive (all signs +1)."""
    lam = ea.as_int_matrix(lam)
    m = len(lam[0])
    verts = []
    for vs in vertex_sets:
        t = tuple(sorted(vs))
        if ea.det(ea.transpose([[row[j - 1] for row in lam] for j in t])) < 0:
            t = (t[1], t[0]) + t[2:]
        verts.append(t)
    return CharacteristicPair(SimplePolytope(dim, m, tuple(verts)), lam, name).checked()


def _cpn(n: int) -> CharacteristicPair:
    lam = [[1 if c == r else 0 for c in range(n)] + [-1] for r in range(n)]
    P = pt.simplex(n)
    cp = CharacteristicPair(P, lam, f"cp{n}").checked()
    if any(s < 0 for s in vertex_signs(cp)):
        cp = CharacteristicPair(P.reversed(), lam, f"cp{n}").checked()
    return cp


_SQUARE = ((1, 2), (2, 3), (3, 4), (4, 1))


def _square(A, name: str) -> CharacteristicPair:
    lam = [[1, 0, A[0][0], A[0][1]], [0, 1, A[1][0], A[1][1]]]
    return CharacteristicPair(SimplePolytope(2, 4, _SQUARE), lam, name).checked()


def _hirzebruch(k: int) -> CharacteristicPair:
    return _toric(2, _SQUARE, [[1, 0, -1, k], [0, 1, 0, -1]], f"hirzebruch{k}")


NONTNS_4GON = (
    ((1, 2), (1, 1)),
    ((1, -2), (1, -1)),
    ((1, -2), (-1, 1)),
    ((1, 2), (-1, -1)),
)

# Facet labels for the two 3-polytopes of the 3-belt example. Both are two
# cubes glued at a vertex; the belt {1,2,3} separates S1 = {4,5,6} from
# S2 = {7,8,9}. With this labeling both matrices below are characteristic,
# and the columns of the second one are inward normals of an explicit
# realization of the glued cubes.
BELT_VERTICES = (
    (1, 2, 4), (1, 2, 7), (1, 3, 5), (1, 3, 8), (1, 4, 5), (1, 7, 8), (2, 3, 6),
    (2, 3, 9), (2, 4, 6), (2, 7, 9), (3, 5, 6), (3, 8, 9), (4, 5, 6), (7, 8, 9),
)
PAPER_P1 = (
    (1, 0, 0, 2, 2, 1, 0, 0, -1),
    (0, 1, 0, 2, 1, 1, 0, -1, -1),
    (0, 0, 1, 1, 1, 1, -1, -1, -1),
)
PAPER_P2 = (
    (1, 0, -1, 1, 1, 0, 1, 1, 0),
    (0, 1, -1, 1, 0, 0, 1, 0, 0),
    (0, 0, 0, 1, 1, 1, -1, -1, -1),
)


def _b4() -> CharacteristicPair:
    out = equivariant_connected_sum(_cpn(2), 0, _cp2bar(), 0)
    return CharacteristicPair(out.polytope, out.lam, "b4")


def _cp2bar() -> CharacteristicPair:
    cp = _cpn(2)
    return CharacteristicPair(cp.polytope.reversed(), cp.lam, "cp2bar").checked()


def _bott_cube() -> CharacteristicPair:
    c = _cpn(1)
    cube = product(product(c, c), c)
    return CharacteristicPair(cube.polytope, cube.lam, "bott_cube")


def _cp1xcp1() -> CharacteristicPair:
    c = _cpn(1)
    sq = product(c, c)
    return CharacteristicPair(sq.polytope, sq.lam, "cp1xcp1")


_BUILDERS = {
    "cp1": lambda: _cpn(1),
    "cp2": lambda: _cpn(2),
    "cp3": lambda: _cpn(3),
    "cp2bar": _cp2bar,
    "cp1xcp1": _cp1xcp1,
    **{f"hirzebruch{k}": (lambda k=k: _hirzebruch(k)) for k in range(4)},
    "bott_cube": _bott_cube,
    "b4": _b4,
    **{f"nontns_4gon_{k + 1}": (lambda k=k: _square(NONTNS_4GON[k], f"nontns_4gon_{k + 1}")) for k in range(4)},
    "paper_P1": lambda: _toric(3, BELT_VERTICES, PAPER_P1, "paper_P1"),
    "paper_P2": lambda: _toric(3, BELT_VERTICES, PAPER_P2, "paper_P2"),
}

BUILTIN_NAMES = tuple(sorted(_BUILDERS))


def builtin(name: str) -> CharacteristicPair:
    """A named fixture; ``cpN`` works for any N >= 1."""
    if name in _BUILDERS:
        return _BUILDERS[name]()
    if name.startswith("cp") and name[2:].isdigit() and int(name[2:]) >= 1:
        return _cpn(int(name[2:]))
    raise UnknownName(name)
