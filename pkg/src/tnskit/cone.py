"""Exact rational polyhedral cones.

A cone is given by generators. Its halfspace description is computed by the
double description method applied to the dual cone inside the linear span of
the generators, so every cone handed to the algorithm is full-dimensional
and its dual is pointed.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Iterable, Sequence

from . import exactalg as ea
from .exactalg import DimensionMismatch

__all__ = ["RationalCone", "from_generators", "double_description", "DimensionMismatch"]


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _adjacent_combinatorial(zp: int, zn: int, zsets: list[int], skip: tuple[int, int], need: int) -> bool:
    common = zp & zn
    if common.bit_count() < need:
        return False
    for k, z in enumerate(zsets):
        if k not in skip and z & common == common:
            return False
    return True


def double_description(rows: Sequence[Sequence[int]], dim: int, adjacency: str = "combinatorial") -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone {x in Q^dim : r.x >= 0 for every row}.

    The rows must span Q^dim. Constraints are inserted in the given order,
    starting from the first ``dim`` linearly independent rows. ``adjacency``
    selects the adjacency test: ``"combinatorial"`` (no third ray is tight on
    every constraint both rays are tight on) or ``"rank"`` (the common tight
    constraints have rank dim - 2). Both are exact and give the same result.
    """
    rows = [tuple(int(x) for x in r) for r in rows]
    if dim == 0:
        return []
    basis: list[int] = []
    for k, r in enumerate(rows):
        if ea.rank([rows[i] for i in basis] + [r]) > len(basis):
            basis.append(k)
            if len(basis) == dim:
                break
    if len(basis) < dim:
        raise ValueError("constraint rows do not span the space")
    Binv = ea.inverse([rows[i] for i in basis])
    rays = [ea.primitive([Binv[i][j] for i in range(dim)]) for j in range(dim)]
    processed = list(basis)
    # zero set of each ray as a bitmask over positions in ``processed``
    zsets = [sum(1 << p for p in range(dim) if p != j) for j in range(dim)]
    for k, a in enumerate(rows):
        if k in basis:
            continue
        vals = [_dot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        bit = 1 << len(processed)
        processed.append(k)
        if not neg:
            zsets = [z | bit if vals[i] == 0 else z for i, z in enumerate(zsets)]
            continue
        new_rays, new_z = [], []
        for i in range(len(rays)):
            if vals[i] >= 0:
                new_rays.append(rays[i])
                new_z.append(zsets[i] | bit if vals[i] == 0 else zsets[i])
        for p in pos:
            for q in neg:
                if adjacency == "rank":
                    common = zsets[p] & zsets[q]
                    if common.bit_count() < dim - 2:
                        continue
                    tight = [rows[processed[b]] for b in range(len(processed) - 1) if common >> b & 1]
                    if ea.rank(tight) != dim - 2:
                        continue
                elif not _adjacent_combinatorial(zsets[p], zsets[q], zsets, (p, q), dim - 2):
                    continue
                r = ea.primitive([vals[p] * y - vals[q] * x for x, y in zip(rays[p], rays[q])])
                new_rays.append(r)
                new_z.append((zsets[p] & zsets[q]) | bit)
        rays, zsets = new_rays, new_z
    return sorted(set(rays))


def _canonical_sign(v: tuple[int, ...]) -> tuple[int, ...]:
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


class RationalCone:
    """The cone generated by integer vectors in Q^d."""

    def __init__(self, ambient_dim: int, generators: Iterable[Sequence]):
        gens = []
        for g in generators:
            g = tuple(g)
            if len(g) != ambient_dim:
                raise DimensionMismatch(f"generator {g} is not in dimension {ambient_dim}")
            p = ea.primitive(g)
            if any(p):
                gens.append(p)
        self.ambient_dim = ambient_dim
        self.generators = tuple(sorted(set(gens)))
        self._lock = threading.Lock()
        self._data = None

    def __repr__(self):
        return f"RationalCone(ambient_dim={self.ambient_dim}, generators={len(self.generators)})"

    # -- lazy double description -----------------------------------------
    def _compute(self):
        with self._lock:
            if self._data is not None:
                return self._data
            d = self.ambient_dim
            if self.generators:
                W, pivots = ea.rref(self.generators)
            else:
                W, pivots = (), ()
            s = len(W)
            # coordinates of each generator in the basis W (rows of the rref)
            coords = [tuple(g[p] for p in pivots) for g in self.generators]
            # short vectors first: lexicographic insertion order makes the
            # intermediate ray sets blow up on grids of squares
            coords.sort(key=lambda c: (sum(abs(x) for x in c), c))
            dual = double_description(coords, s) if s else []
            # facet normals inside span(W): solve (W W^T) y = h_c, normal = W^T y
            if dual:
                gram = ea.matmul(W, ea.transpose(W))
                ginv = ea.inverse(gram)
                normals = []
                for h in dual:
                    y = ea.matvec(ginv, h)
                    normals.append(ea.primitive([_dot([W[i][j] for i in range(s)], y) for j in range(d)]))
            else:
                normals = []
            normals = sorted(set(normals))
            equations = [_canonical_sign(ea.primitive(v)) for v in ea.nullspace(W, d)] if s else [
                tuple(int(i == j) for j in range(d)) for i in range(d)
            ]
            # lineality: vectors of the span on which every facet normal vanishes
            if s:
                lin_coords = ea.nullspace(dual, s) if dual else ea.nullspace([], s)
                lin = [[sum(c[i] * W[i][j] for i in range(s)) for j in range(d)] for c in lin_coords]
                lin_basis = [_canonical_sign(ea.primitive(r)) for r in ea.rref(lin)[0]] if lin else []
            else:
                lin_basis = []
            rays = self._rays(normals, lin_basis, s)
            self._data = (tuple(normals), tuple(equations), tuple(lin_basis), tuple(rays))
            return self._data

    def _rays(self, normals, lin_basis, s):
        target = s - len(lin_basis) - 1
        if target < 0:
            return []
        if lin_basis:
            G = ea.matmul(lin_basis, ea.transpose(lin_basis))
            Ginv = ea.inverse(G)
        found = set()
        for g in self.generators:
            tight = [h for h in normals if _dot(h, g) == 0]
            if (ea.rank(tight) if tight else 0) != target:
                continue
            if lin_basis:
                coef = ea.matvec(Ginv, [_dot(b, g) for b in lin_basis])
                proj = [Fraction(g[j]) - sum(c * b[j] for c, b in zip(coef, lin_basis)) for j in range(len(g))]
            else:
                proj = g
            p = ea.primitive(proj)
            if any(p):
                found.add(p)
        return sorted(found)

    # -- descriptions ----------------------------------------------------
    def facet_normals(self) -> tuple[tuple[int, ...], ...]:
        """Irredundant inequalities h.x >= 0 cutting the cone inside its span."""
        return self._compute()[0]

    def equations(self) -> tuple[tuple[int, ...], ...]:
        """Basis of the normals h with h.x = 0 on the whole cone."""
        return self._compute()[1]

    def h_description(self) -> tuple[tuple[int, ...], ...]:
        """All halfspaces h.x >= 0: facet normals plus both signs of each equation.

        Empty exactly when the cone is the whole space.
        """
        normals, equations = self._compute()[:2]
        return normals + tuple(e for v in equations for e in (v, tuple(-x for x in v)))

    def lineality_basis(self) -> tuple[tuple[int, ...], ...]:
        return self._compute()[2]

    def extreme_rays(self) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
        """``(lineality_basis, rays)``; the rays span the pointed quotient and
        are taken orthogonal to the lineality space."""
        data = self._compute()
        return data[2], data[3]

    @property
    def dim(self) -> int:
        return self.ambient_dim - len(self.equations())

    def is_full_space(self) -> bool:
        return not self.h_description()

    def contains(self, x: Sequence) -> bool:
        if len(x) != self.ambient_dim:
            raise DimensionMismatch("point has the wrong dimension")
        return all(_dot(h, x) >= 0 for h in self.h_description())

    def contains_cone(self, other: "RationalCone") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatch("cones live in different spaces")
        return all(self.contains(g) for g in other.generators)

    def equals(self, other: "RationalCone") -> bool:
        return self.contains_cone(other) and other.contains_cone(self)

    @classmethod
    def from_halfspaces(cls, ambient_dim: int, normals: Iterable[Sequence[int]]) -> "RationalCone":
        """The cone {x : h.x >= 0 for every h}, via the dual of the dual."""
        dual = cls(ambient_dim, normals)
        gens = list(dual.facet_normals())
        gens += [e for v in dual.equations() for e in (v, tuple(-x for x in v))]
        return cls(ambient_dim, gens)


def from_generators(d: int, gens: Iterable[Sequence]) -> RationalCone:
    return RationalCone(d, gens)
