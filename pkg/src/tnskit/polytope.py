"""Combinatorial simple polytopes stored by vertex-facet incidence.

A vertex is an ordered tuple of the ``n`` facets meeting there (1-based).
For ``n >= 2`` the ordering carries the orientation: the tuple lists the
facets so that their inward normals form a positive basis, and adjacent
vertices must induce opposite orientations on their common ridge. A
1-polytope cannot encode orientation by ordering, so by convention its first
listed vertex is positive and the second negative.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Sequence

__all__ = [
    "PolytopeError",
    "InvalidPolytope",
    "IndexOutOfRange",
    "InvalidMatching",
    "EmptyFace",
    "FacetTruncation",
    "DehnSommervilleViolation",
    "SimplePolytope",
    "permutation_sign",
    "simplex",
    "face_nonempty",
    "minimal_missing_faces",
    "is_flag",
    "f_vector",
    "h_vector",
    "product",
    "connected_sum",
    "truncate_face",
    "facet_polytope",
    "relabel",
]


class PolytopeError(ValueError):
    pass


class InvalidPolytope(PolytopeError):
    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class IndexOutOfRange(PolytopeError):
    pass


class InvalidMatching(PolytopeError):
    pass


class EmptyFace(PolytopeError):
    pass


class FacetTruncation(PolytopeError):
    pass


class DehnSommervilleViolation(PolytopeError):
    pass


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation that sorts ``seq`` (entries distinct)."""
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def _swap_front(t: tuple[int, ...]) -> tuple[int, ...]:
    return (t[1], t[0]) + t[2:]


@dataclass(frozen=True)
class SimplePolytope:
    dim: int
    num_facets: int
    vertices: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(tuple(int(i) for i in v) for v in self.vertices))
        problems = self.violations()
        if problems:
            raise InvalidPolytope(problems)

    # -- orientation -----------------------------------------------------
    def vertex_orientation(self, idx: int) -> int:
        """+1 when the stored tuple of vertex ``idx`` is positively ordered."""
        if self.dim == 1:
            return 1 if idx == 0 else -1
        return 1

    def reversed(self) -> "SimplePolytope":
        """The same polytope with the opposite orientation."""
        if self.dim == 1:
            return SimplePolytope(1, self.num_facets, self.vertices[::-1])
        return SimplePolytope(self.dim, self.num_facets, tuple(_swap_front(v) for v in self.vertices))

    def violations(self) -> list[str]:
        n, m = self.dim, self.num_facets
        out: list[str] = []
        if n < 1:
            return ["dimension must be at least 1"]
        if not self.vertices:
            return ["polytope has no vertices"]
        for k, v in enumerate(self.vertices):
            if len(v) != n or len(set(v)) != n:
                out.append(f"vertex {k} must list {n} distinct facets")
            if any(i < 1 or i > m for i in v):
                out.append(f"vertex {k} uses a facet index outside 1..{m}")
        if out:
            return out
        sets = [frozenset(v) for v in self.vertices]
        if len(set(sets)) != len(sets):
            out.append("two vertices have the same facet set")
        used = set().union(*sets)
        missing = sorted(set(range(1, m + 1)) - used)
        if missing:
            out.append(f"facets {missing} contain no vertex")
        if n == 1:
            if len(self.vertices) != 2:
                out.append("a 1-polytope has exactly two vertices")
            return out
        ridges: dict[tuple[int, ...], list[tuple[int, int]]] = {}
        for k, v in enumerate(self.vertices):
            for p in range(n):
                rest = v[:p] + v[p + 1:]
                orient = (-1) ** p * permutation_sign(rest)
                ridges.setdefault(tuple(sorted(rest)), []).append((k, orient))
        for ridge, owners in ridges.items():
            if len(owners) != 2:
                out.append(f"ridge {list(ridge)} lies in {len(owners)} vertices, expected 2")
            elif owners[0][1] == owners[1][1]:
                out.append(
                    f"vertices {owners[0][0]} and {owners[1][0]} induce the same orientation on ridge {list(ridge)}"
                )
        seen = {0}
        stack = [0]
        adj: dict[int, list[int]] = {}
        for owners in ridges.values():
            if len(owners) == 2:
                a, b = owners[0][0], owners[1][0]
                adj.setdefault(a, []).append(b)
                adj.setdefault(b, []).append(a)
        while stack:
            for nb in adj.get(stack.pop(), []):
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if len(seen) != len(self.vertices):
            out.append("vertex-edge graph is disconnected")
        return out

    # -- faces -----------------------------------------------------------
    def faces(self) -> frozenset[frozenset[int]]:
        """All nonempty facet sets with nonempty intersection."""
        out = set()
        for v in self.vertices:
            for k in range(1, self.dim + 1):
                out.update(frozenset(c) for c in combinations(v, k))
        return frozenset(out)

    def vertex_index(self, facets: Iterable[int]) -> int:
        target = frozenset(facets)
        for k, v in enumerate(self.vertices):
            if frozenset(v) == target:
                return k
        raise IndexOutOfRange(f"no vertex with facets {sorted(target)}")


def simplex(n: int) -> SimplePolytope:
    """The n-simplex with facets 1..n+1, oriented so that vertex {1..n} is
    listed in increasing order."""
    verts = []
    for missing in range(n + 1, 0, -1):
        t = tuple(i for i in range(1, n + 2) if i != missing)
        # the boundary orientation of [1..n+1] omitting position missing-1
        if n >= 2 and (-1) ** (missing - 1) * (-1) ** n < 0:
            t = _swap_front(t)
        verts.append(t)
    if n == 1:
        verts = [(1,), (2,)]
    return SimplePolytope(n, n + 1, tuple(verts))


def _check_range(P: SimplePolytope, S: Iterable[int]) -> frozenset[int]:
    S = frozenset(int(i) for i in S)
    bad = [i for i in S if i < 1 or i > P.num_facets]
    if bad:
        raise IndexOutOfRange(f"facet indices {sorted(bad)} outside 1..{P.num_facets}")
    return S


def face_nonempty(P: SimplePolytope, S: Iterable[int]) -> bool:
    """True iff the facets in ``S`` have a common vertex."""
    S = _check_range(P, S)
    return any(S <= set(v) for v in P.vertices)


def minimal_missing_faces(P: SimplePolytope, max_size: int | None = None) -> list[tuple[int, ...]]:
    """Inclusion-minimal empty facet intersections, sorted lexicographically."""
    if max_size is None:
        max_size = P.num_facets
    faces = P.faces()
    by_size: dict[int, list[tuple[int, ...]]] = {}
    for f in faces:
        by_size.setdefault(len(f), []).append(tuple(sorted(f)))
    out: list[tuple[int, ...]] = []
    for k in range(2, min(max_size, P.dim + 1) + 1):
        for base in by_size.get(k - 1, []):
            for j in range(base[-1] + 1, P.num_facets + 1):
                S = base + (j,)
                fs = frozenset(S)
                if fs in faces:
                    continue
                if all(fs - {i} in faces for i in S):
                    out.append(S)
    return sorted(out)


def is_flag(P: SimplePolytope) -> bool:
    return all(len(S) == 2 for S in minimal_missing_faces(P))


def _simplicial_f(P: SimplePolytope) -> list[int]:
    """Number of faces of the dual complex with i vertices, i = 0..n."""
    counts = [0] * (P.dim + 1)
    counts[0] = 1
    for f in P.faces():
        counts[len(f)] += 1
    return counts


def f_vector(P: SimplePolytope) -> tuple[int, ...]:
    """(f_0, ..., f_{n-1}): vertices, edges, ..., facets of ``P``."""
    fk = _simplicial_f(P)
    n = P.dim
    return tuple(fk[n - j] for j in range(n))


def h_vector(P: SimplePolytope) -> tuple[int, ...]:
    n = P.dim
    fk = _simplicial_f(P)
    h = tuple(
        sum((-1) ** (k - i) * comb(n - i, k - i) * fk[i] for i in range(k + 1))
        for k in range(n + 1)
    )
    if h != h[::-1]:
        raise DehnSommervilleViolation(f"h-vector {h} is not palindromic")
    return h


def product(P: SimplePolytope, Q: SimplePolytope) -> SimplePolytope:
    """Cartesian product; facets of ``Q`` are shifted by ``P.num_facets``."""
    shift = P.num_facets
    verts = []
    for a, v in enumerate(P.vertices):
        for b, w in enumerate(Q.vertices):
            t = v + tuple(j + shift for j in w)
            if P.vertex_orientation(a) * Q.vertex_orientation(b) < 0:
                t = _swap_front(t)
            verts.append(t)
    return SimplePolytope(P.dim + Q.dim, P.num_facets + Q.num_facets, tuple(verts))


def _coherent(n: int, m: int, verts) -> SimplePolytope | None:
    try:
        return SimplePolytope(n, m, tuple(verts))
    except InvalidPolytope:
        return None


def _resolve_matching(P, v, Q, w, matching) -> dict[int, int]:
    if not (0 <= v < len(P.vertices)) or not (0 <= w < len(Q.vertices)):
        raise IndexOutOfRange("vertex index out of range")
    pv, qw = P.vertices[v], Q.vertices[w]
    if matching is None:
        return dict(zip(pv, qw))
    if isinstance(matching, Mapping):
        match = {int(a): int(b) for a, b in matching.items()}
    else:
        match = dict(zip(pv, (int(b) for b in matching)))
    if set(match) != set(pv) or sorted(match.values()) != sorted(qw):
        raise InvalidMatching(f"matching {match} is not a bijection {sorted(pv)} -> {sorted(qw)}")
    return match


def connected_sum(
    P: SimplePolytope,
    v: int,
    Q: SimplePolytope,
    w: int,
    matching: Mapping[int, int] | Sequence[int] | None = None,
) -> tuple[SimplePolytope, dict[int, int]]:
    """Connected sum of ``P`` and ``Q`` at vertices ``v`` and ``w``.

    ``matching`` maps each facet of ``P`` at ``v`` to a facet of ``Q`` at
    ``w`` (a dict, or a sequence aligned with ``P.vertices[v]``); by default
    tuple positions are paired. The facets of ``P`` keep their indices, the
    unmatched facets of ``Q`` follow in increasing order. Returns the new
    polytope and the relabeling of ``Q``'s facets.
    """
    if P.dim != Q.dim or P.dim < 2:
        raise PolytopeError("connected sum needs two polytopes of the same dimension >= 2")
    match = _resolve_matching(P, v, Q, w, matching)
    inverse = {b: a for a, b in match.items()}
    qmap: dict[int, int] = {}
    nxt = P.num_facets + 1
    for j in range(1, Q.num_facets + 1):
        if j in inverse:
            qmap[j] = inverse[j]
        else:
            qmap[j] = nxt
            nxt += 1
    m = P.num_facets + Q.num_facets - P.dim
    left = [t for k, t in enumerate(P.vertices) if k != v]
    right = [tuple(qmap[j] for j in t) for k, t in enumerate(Q.vertices) if k != w]
    for candidate in (right, [_swap_front(t) for t in right]):
        R = _coherent(P.dim, m, left + candidate)
        if R is not None:
            return R, qmap
    raise InvalidMatching("connected sum does not produce a simple polytope")


def truncate_face(P: SimplePolytope, G: Iterable[int]) -> SimplePolytope:
    """Cut off the face ``G`` (given by the facets containing it).

    The new facet gets index ``m + 1``. Each vertex on the face is replaced
    by one vertex per facet of ``G``, with that facet swapped for the new one
    in place (which preserves the orientation).
    """
    G = _check_range(P, G)
    if len(G) == 1:
        raise FacetTruncation("truncating a facet does not change the polytope")
    if len(G) == 0 or not face_nonempty(P, G):
        raise EmptyFace(f"facets {sorted(G)} do not meet")
    new = P.num_facets + 1
    verts = []
    for t in P.vertices:
        if G <= set(t):
            for i in sorted(G):
                verts.append(tuple(new if j == i else j for j in t))
        else:
            verts.append(t)
    return SimplePolytope(P.dim, new, tuple(verts))


def facet_polytope(P: SimplePolytope, i: int) -> tuple[SimplePolytope, tuple[int, ...]]:
    """The facet ``F_i`` as a polytope with its induced boundary orientation.

    Returns the polytope and the original index of each of its facets
    (``old[k]`` is the facet of ``P`` that became facet ``k + 1``).
    """
    _check_range(P, [i])
    if P.dim < 2:
        raise PolytopeError("facets of a 1-polytope are points")
    pieces = []
    for k, t in enumerate(P.vertices):
        if i in t:
            p = t.index(i)
            pieces.append((t[:p] + t[p + 1:], (-1) ** p * P.vertex_orientation(k)))
    old = tuple(sorted({j for rest, _ in pieces for j in rest}))
    new_index = {j: k + 1 for k, j in enumerate(old)}
    verts = []
    for rest, sign in pieces:
        t = tuple(new_index[j] for j in rest)
        if len(t) >= 2 and sign < 0:
            t = _swap_front(t)
        verts.append((t, sign))
    if P.dim == 2:
        verts.sort(key=lambda ts: -ts[1])
    return SimplePolytope(P.dim - 1, len(old), tuple(t for t, _ in verts)), old


def relabel(P: SimplePolytope, perm: Mapping[int, int]) -> SimplePolytope:
    """Rename facet ``i`` to ``perm[i]``; the vertex order is kept."""
    return SimplePolytope(P.dim, P.num_facets, tuple(tuple(perm[j] for j in t) for t in P.vertices))
