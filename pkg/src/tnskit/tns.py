"""Deciding the TNS property of a characteristic pair.

Complete decisions are available for n <= 3. For n >= 4 a semidefinite
quadratic form certifies NotTNS and full power cones certify TNS; anything
else is reported as Unknown.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from itertools import product as cartesian

from . import exactalg as ea
from .charpair import CharacteristicPair, vertex_signs
from .cohomology import CohClass, CohomologyRing, _padd, _pmul, _ppow, build_ring
from .cone import RationalCone
from .exactalg import DimensionMismatch
from .forms import NSD, PSD, FormReport, form_Qa, intersection_form, iter_quadratic_family
from .polytope import minimal_missing_faces

__all__ = [
    "TNS",
    "NOT_TNS",
    "UNKNOWN",
    "FULL_RANK",
    "RANK_DEFICIENT",
    "TnsVerdict",
    "NotToricLike",
    "NotAMissingFace",
    "NormalFormMismatch",
    "DimensionMismatch",
    "check_tns",
    "check_toric_surface",
    "missing_face_matrix_class",
    "flag_necessary_check",
    "cone_S_ch2",
    "power_cone",
    "poincare_dual",
    "form_summary",
]

TNS = "TNS"
NOT_TNS = "NotTNS"
UNKNOWN = "Unknown"

FULL_RANK = "FullRank"
RANK_DEFICIENT = "RankDeficient"

# above this many generators the unreduced grid is not attempted
FULL_GRID_LIMIT = 3**9


class NotToricLike(ValueError):
    pass


class NotAMissingFace(ValueError):
    pass


class NormalFormMismatch(ValueError):
    pass


@dataclass(frozen=True)
class TnsVerdict:
    """Outcome of a TNS check.

    ``certificate`` is a plain dict so that it serializes as is; a form
    certificate holds the class ``a`` in basis coordinates and the exact
    inertia of Q_a, which is enough to recheck it.
    """

    status: str
    method: str
    certificate: dict | None = None
    notes: str = ""
    form: FormReport | None = field(default=None, compare=False, repr=False)


def _fr(x: Fraction) -> str:
    return str(Fraction(x))


def form_summary(rep: FormReport) -> dict:
    out = {
        "a": [_fr(c) for c in rep.a.coords],
        "a_degree": rep.a.degree,
        "classification": rep.classification,
        "k": rep.k,
    }
    if rep.inertia is not None:
        out["inertia"] = list(rep.inertia)
    return out


# -- cones of powers -----------------------------------------------------

def _power_generators(R: CohomologyRing, power: int, variables) -> set[tuple[int, ...]]:
    """Primitive coordinates of reduce((sum a_i x_i)^power) for a_i in {-1,0,1}."""
    forms = [R._linear[j] for j in variables]
    gens = set()
    if power == 2:
        # squares from the table of products x_i x_j
        table = {}
        for i, j in combinations_with_replacement(range(len(forms)), 2):
            table[i, j] = R._reduce_free(_pmul(forms[i], forms[j]), 2).coords
        dim = len(R.basis[2])
        for a in cartesian((-1, 0, 1), repeat=len(forms)):
            nz = [i for i, c in enumerate(a) if c]
            if not nz or a[nz[0]] < 0:
                continue
            v = [Fraction(0)] * dim
            for x, i in enumerate(nz):
                for j in nz[x:]:
                    c = a[i] * a[j] * (1 if i == j else 2)
                    row = table[i, j]
                    for t in range(dim):
                        v[t] += c * row[t]
            gens.add(ea.primitive(v))
    else:
        for a in cartesian((-1, 0, 1), repeat=len(forms)):
            nz = [i for i, c in enumerate(a) if c]
            if not nz or (power % 2 == 0 and a[nz[0]] < 0):
                continue
            p: dict = {}
            for c, f in zip(a, forms):
                if c:
                    p = _padd(p, f, c)
            gens.add(ea.primitive(R._reduce_free(_ppow(p, power, R.r), power).coords))
    gens.discard(tuple(0 for _ in range(len(R.basis[power]))))
    return gens


def power_cone(R: CohomologyRing, k: int, full_grid: bool = False) -> RationalCone:
    """Cone in H^{4k} on the 2k-th powers of {-1,0,1} combinations of the x_i.

    By default only the variables not eliminated by the ring are used.
    """
    if not 0 < 2 * k <= R.n:
        raise DimensionMismatch(f"need 0 < 2k <= {R.n}")
    variables = range(1, R.m + 1) if full_grid else R.free
    return RationalCone(len(R.basis[2 * k]), _power_generators(R, 2 * k, variables))


def cone_S_ch2(cp: CharacteristicPair, full_grid: bool = False) -> RationalCone:
    """The H^4 cone of reduced squares of a 3-dimensional pair."""
    if cp.dim != 3:
        raise DimensionMismatch(f"cone_S_ch2 needs n = 3, got {cp.dim}")
    return power_cone(_ring(cp), 1, full_grid)


def poincare_dual(R: CohomologyRing, normal) -> CohClass:
    """The class a of degree n - 2 with <a y, [M]> = normal . y for every y of degree 2."""
    P = R.pairing_matrix(R.n - 2)
    coeffs = ea.solve(ea.transpose(P), [Fraction(x) for x in normal])
    return CohClass(R.n - 2, tuple(Fraction(c) for c in coeffs))


def _ring(cp: CharacteristicPair) -> CohomologyRing:
    return build_ring(cp)


def _semidefinite(rep: FormReport) -> bool:
    return rep.classification in (PSD, NSD)


# -- decisions -----------------------------------------------------------

def _dim2(cp: CharacteristicPair) -> TnsVerdict:
    rep = intersection_form(_ring(cp))
    cert = form_summary(rep)
    if rep.inertia.p > 0 and rep.inertia.q > 0:
        return TnsVerdict(TNS, "lannes-signature", cert, "intersection form is indefinite", rep)
    return TnsVerdict(NOT_TNS, "lannes-signature", cert, "intersection form is definite", rep)


def _dim3(cp: CharacteristicPair, radius: int) -> TnsVerdict:
    R = _ring(cp)
    cone = power_cone(R, 1)
    cert = {
        "grid_size": 3 ** len(R.free),
        "generator_count": len(cone.generators),
        "full": cone.is_full_space(),
    }
    if cert["full"]:
        return TnsVerdict(TNS, "dim6-cone", cert, "squares span H^4 as a cone")
    normal = cone.h_description()[0]
    cert["facet_count"] = len(cone.facet_normals())
    cert["normal"] = list(normal)
    cert["normal_form"] = form_summary(form_Qa(R, poincare_dual(R, normal), 2))
    # duals of facet normals are tried before the grid of small classes
    duals = (form_Qa(R, poincare_dual(R, f), 2) for f in cone.facet_normals())
    candidates = (r for it in (duals, iter_quadratic_family(R, 1, radius)) for r in it)
    witness = next((r for r in candidates if _semidefinite(r)), None)
    if witness is not None:
        cert["witness"] = form_summary(witness)
        return TnsVerdict(NOT_TNS, "dim6-cone", cert, "cone of squares is not full", witness)
    # no small semidefinite form; fall back to the grid over every variable
    if 3**cp.num_facets > FULL_GRID_LIMIT:
        return TnsVerdict(
            NOT_TNS, "dim6-cone", cert, "cone of squares over the free variables is not full"
        )
    big = power_cone(R, 1, full_grid=True)
    cert["full_grid_generator_count"] = len(big.generators)
    cert["full_grid_full"] = big.is_full_space()
    if cert["full_grid_full"]:
        return TnsVerdict(TNS, "dim6-cone", cert, "squares over all variables span H^4")
    cert["normal"] = list(big.h_description()[0])
    return TnsVerdict(NOT_TNS, "dim6-cone", cert, "cone of squares over all variables is not full")


def _high(cp: CharacteristicPair, radius: int) -> TnsVerdict:
    R = _ring(cp)
    for rep in iter_quadratic_family(R, 1, radius):
        if _semidefinite(rep):
            return TnsVerdict(NOT_TNS, "semidefinite-witness", form_summary(rep), "", rep)
    counts = {}
    for k in range(1, R.n // 2 + 1):
        if 3 ** len(R.free) > FULL_GRID_LIMIT:
            return TnsVerdict(UNKNOWN, "cone-sufficient", {"degree": 4 * k}, "generator grid too large")
        cone = power_cone(R, k)
        counts[str(4 * k)] = len(cone.generators)
        if not cone.is_full_space():
            return TnsVerdict(
                UNKNOWN,
                "cone-sufficient",
                {"degree": 4 * k, "generator_counts": counts},
                f"cone of {2 * k}-th powers in H^{4 * k} is not full at this radius",
            )
    return TnsVerdict(TNS, "cone-sufficient", {"generator_counts": counts}, "all power cones are full")


def check_tns(cp: CharacteristicPair, radius: int = 1) -> TnsVerdict:
    cp = cp.checked()
    n = cp.dim
    if n == 1:
        return TnsVerdict(TNS, "dim1-vacuous", None, "no conditions in dimension 1")
    if n == 2:
        return _dim2(cp)
    if n == 3:
        return _dim3(cp, radius)
    return _high(cp, radius)


def _require_toric_like(cp: CharacteristicPair):
    if any(s != 1 for s in vertex_signs(cp)):
        raise NotToricLike("some fixed point has sign -1")


def check_toric_surface(cp: CharacteristicPair) -> TnsVerdict:
    """Toric surfaces are TNS unless the polygon is a triangle."""
    if cp.dim != 2:
        raise DimensionMismatch(f"need n = 2, got {cp.dim}")
    _require_toric_like(cp.checked())
    m = cp.num_facets
    status = NOT_TNS if m == 3 else TNS
    return TnsVerdict(
        status, "lannes-signature", {"num_facets": m}, "all signs +1 taken as toric; projectivity not checked"
    )


def _normal_forms(k: int, n: int):
    full = [[int(i == j) for j in range(k)] for i in range(n)]
    deficient = [[int(i == j) - int(j == k - 1) if i < k - 1 else 0 for j in range(k)] for i in range(n)]
    return full, deficient


def missing_face_matrix_class(cp: CharacteristicPair, S) -> str:
    """Which of the two normal forms the columns of a missing face take."""
    S = tuple(S)
    if len(S) <= 2 or tuple(sorted(S)) not in minimal_missing_faces(cp.polytope):
        raise NotAMissingFace(f"{list(S)} is not a minimal missing face with more than two facets")
    n, k = cp.dim, len(S)
    A = ea.transpose([cp.column(j) for j in S])
    r = ea.rank(A)
    full, deficient = _normal_forms(k, n)
    if r == k:
        case, target = FULL_RANK, full
    elif r == k - 1:
        case, target = RANK_DEFICIENT, deficient
    else:
        raise NormalFormMismatch(f"columns of {list(S)} have rank {r}")
    if ea.glz_normal_form(A)[0] != ea.glz_normal_form(target)[0]:
        raise NormalFormMismatch(f"columns of {list(S)} are not equivalent to the {case} form")
    return case


def flag_necessary_check(cp: CharacteristicPair) -> TnsVerdict:
    if cp.dim != 3:
        raise DimensionMismatch(f"need n = 3, got {cp.dim}")
    _require_toric_like(cp.checked())
    note = "all signs +1 taken as toric; projectivity not checked"
    big = [S for S in minimal_missing_faces(cp.polytope) if len(S) > 2]
    if not big:
        return TnsVerdict(UNKNOWN, "flag-obstruction", None, "polytope is flag; " + note)
    S = big[0]
    cert = {"missing_face": list(S)}
    try:
        cert["matrix_class"] = missing_face_matrix_class(cp, S)
    except NormalFormMismatch as exc:
        cert["matrix_class"] = str(exc)
    return TnsVerdict(NOT_TNS, "flag-obstruction", cert, "polytope is not flag; " + note)
