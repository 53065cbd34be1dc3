"""Command line interface.

    tnskit check FILE [--tns] [--flag] [--signature] [--cone] [--volume]
                      [--radius R] [--format json|text] [--timing]
    tnskit example NAME
    tnskit construct product A.json B.json ...
    tnskit construct connsum A.json v=I B.json v=J
    tnskit construct blowup A.json face=I,J,...

Exit codes: 0 success, 2 parse error, 3 validation failure, 4 unsupported
dimension for a requested analysis, 5 unknown builtin name, 6 violated
construction precondition.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import charpair as chp
from .charpair import BUILTIN_NAMES, CharacteristicPair, builtin
from .cohomology import build_ring
from .forms import intersection_form
from .polytope import InvalidPolytope, PolytopeError, SimplePolytope, h_vector
from .tns import (
    NotToricLike,
    check_tns,
    cone_S_ch2,
    flag_necessary_check,
)
from .volpoly import algebra_dims, condition_iv_scan, volume_polynomial

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_DIMENSION = 4
EXIT_UNKNOWN = 5
EXIT_CONSTRUCTION = 6


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# -- documents -------------------------------------------------------------

def to_document(cp: CharacteristicPair, name: str | None = None) -> dict:
    return {
        "dim": cp.dim,
        "lambda": [list(r) for r in cp.lam],
        "name": name if name is not None else cp.name,
        "num_facets": cp.num_facets,
        "vertices": [list(t) for t in cp.polytope.vertices],
    }


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise CliError(EXIT_PARSE, f"{what} must be an integer, got {x!r}")
    return x


def from_document(doc) -> CharacteristicPair:
    """Build a pair from a parsed document; raises CliError on bad input."""
    if not isinstance(doc, dict):
        raise CliError(EXIT_PARSE, "document must be a JSON object")
    for key in ("dim", "num_facets", "vertices", "lambda"):
        if key not in doc:
            raise CliError(EXIT_PARSE, f"missing field {key!r}")
    n = _int(doc["dim"], "dim")
    m = _int(doc["num_facets"], "num_facets")
    if not isinstance(doc["vertices"], list) or not isinstance(doc["lambda"], list):
        raise CliError(EXIT_PARSE, "vertices and lambda must be lists")
    verts = []
    for t in doc["vertices"]:
        if not isinstance(t, list):
            raise CliError(EXIT_PARSE, "each vertex must be a list of facet indices")
        verts.append(tuple(_int(x, "facet index") for x in t))
    lam = []
    for r in doc["lambda"]:
        if not isinstance(r, list):
            raise CliError(EXIT_PARSE, "lambda must be a list of rows")
        lam.append(tuple(_int(x, "lambda entry") for x in r))
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise CliError(EXIT_PARSE, "name must be a string")
    try:
        P = SimplePolytope(n, m, tuple(verts))
    except InvalidPolytope as exc:
        raise CliError(EXIT_INVALID, "invalid polytope:\n" + "\n".join(f"  {v}" for v in exc.violations))
    except PolytopeError as exc:
        raise CliError(EXIT_INVALID, f"invalid polytope: {exc}")
    cp = CharacteristicPair(P, tuple(lam), name)
    problems = chp.validate(cp)
    if problems:
        raise CliError(EXIT_INVALID, "invalid characteristic pair:\n" + "\n".join(f"  {v}" for v in problems))
    return cp


def load(path: str) -> CharacteristicPair:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc.strerror}")
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CliError(EXIT_PARSE, f"{path}: not valid JSON ({exc})")
    return from_document(doc)


# -- check -----------------------------------------------------------------

def _verdict(v) -> dict:
    return {"certificate": v.certificate, "method": v.method, "notes": v.notes, "status": v.status}


def build_report(cp: CharacteristicPair, sections: set[str], radius: int = 1, timing: bool = False) -> dict:
    n = cp.dim
    t0 = time.perf_counter()
    h = h_vector(cp.polytope)
    betti = [0] * (2 * n + 1)
    for k, x in enumerate(h):
        betti[2 * k] = x
    report: dict = {
        "betti": betti,
        "input": to_document(cp),
        "validation": {"valid": True, "violations": []},
    }
    if "signature" in sections:
        report["signature"] = {
            "signature": chp.signature(cp),
            "vertex_signs": list(chp.vertex_signs(cp)),
        }
    if n == 2:
        rep = intersection_form(build_ring(cp))
        report["intersection_form"] = {
            "inertia": list(rep.inertia),
            "matrix": [[str(x) for x in row] for row in rep.matrix],
        }
    if "tns" in sections:
        report["tns"] = _verdict(check_tns(cp, radius))
    if "flag" in sections:
        try:
            report["flag"] = _verdict(flag_necessary_check(cp))
        except NotToricLike as exc:
            report["flag"] = {"status": "not-applicable", "notes": str(exc)}
    if "cone" in sections:
        cone = cone_S_ch2(cp)
        lin, rays = cone.extreme_rays()
        report["cone"] = {
            "facet_count": len(cone.facet_normals()),
            "facets": [list(x) for x in cone.facet_normals()],
            "full": cone.is_full_space(),
            "generator_count": len(cone.generators),
            "grid_size": 3 ** (cp.num_facets - cp.dim),
            "lineality_dim": len(lin),
            "ray_count": len(rays),
            "rays": [list(x) for x in rays],
        }
    if "volume" in sections:
        V = volume_polynomial(build_ring(cp))
        scan = condition_iv_scan(V, radius=radius)
        vol = {
            "algebra_dims": list(algebra_dims(V)),
            "condition_iv": scan.verdict,
            "matches_h_vector": list(algebra_dims(V)) == list(h),
        }
        if scan.witness is not None:
            vol["witness"] = [
                {"coefficient": str(c), "exponent": list(e)} for e, c in sorted(scan.witness.coefficients.items())
            ]
            vol["witness_inertia"] = list(scan.witness_inertia)
        report["volume"] = vol
    if timing:
        report["timing_seconds"] = round(time.perf_counter() - t0, 3)
    return report


def _text(report: dict, prefix: str = "") -> list[str]:
    lines = []
    for key in sorted(report):
        val = report[key]
        if isinstance(val, dict):
            lines.append(f"{prefix}{key}:")
            lines.extend(_text(val, prefix + "  "))
        else:
            lines.append(f"{prefix}{key}: {json.dumps(val, sort_keys=True)}")
    return lines


def cmd_check(args) -> int:
    cp = load(args.path)
    requested = {s for s in ("tns", "flag", "signature", "cone", "volume") if getattr(args, s)}
    n = cp.dim
    if requested:
        if "cone" in requested and n != 3:
            raise CliError(EXIT_DIMENSION, f"--cone needs dimension 3, got {n}")
        if "flag" in requested and n != 3:
            raise CliError(EXIT_DIMENSION, f"--flag needs dimension 3, got {n}")
        sections = requested
    else:
        sections = {"tns", "signature", "volume"}
        if n == 3:
            sections |= {"flag", "cone"}
    report = build_report(cp, sections, args.radius, args.timing)
    if args.format == "json":
        sys.stdout.write(dumps(report))
    else:
        sys.stdout.write("\n".join(_text(report)) + "\n")
    return EXIT_OK


def cmd_example(args) -> int:
    try:
        cp = builtin(args.name)
    except chp.UnknownName:
        raise CliError(EXIT_UNKNOWN, f"unknown example {args.name!r}; available: {', '.join(BUILTIN_NAMES)}, cpN")
    sys.stdout.write(dumps(to_document(cp)))
    return EXIT_OK


# -- construct -------------------------------------------------------------

def _param(token: str, key: str) -> str:
    prefix = key + "="
    if not token.startswith(prefix):
        raise CliError(EXIT_PARSE, f"expected {prefix}..., got {token!r}")
    return token[len(prefix):]


def _vertex(cp: CharacteristicPair, token: str) -> int:
    try:
        v = int(_param(token, "v"))
    except ValueError:
        raise CliError(EXIT_PARSE, f"bad vertex parameter {token!r}")
    if not 1 <= v <= len(cp.polytope.vertices):
        raise CliError(EXIT_CONSTRUCTION, f"vertex {v} out of range 1..{len(cp.polytope.vertices)}")
    return v - 1


def cmd_construct(args) -> int:
    op, inputs = args.op, args.inputs
    try:
        if op == "product":
            if len(inputs) < 2:
                raise CliError(EXIT_PARSE, "product needs at least two inputs")
            pairs = [load(p) for p in inputs]
            out = pairs[0]
            for cp in pairs[1:]:
                out = chp.product(out, cp)
        elif op == "connsum":
            if len(inputs) != 4:
                raise CliError(EXIT_PARSE, "usage: construct connsum A.json v=I B.json v=J")
            a, b = load(inputs[0]), load(inputs[2])
            if a.dim != b.dim:
                raise CliError(EXIT_CONSTRUCTION, "summands have different dimensions")
            out = chp.equivariant_connected_sum(a, _vertex(a, inputs[1]), b, _vertex(b, inputs[3]))
        else:
            if len(inputs) != 2:
                raise CliError(EXIT_PARSE, "usage: construct blowup A.json face=I,J,...")
            a = load(inputs[0])
            try:
                G = [int(x) for x in _param(inputs[1], "face").split(",")]
            except ValueError:
                raise CliError(EXIT_PARSE, f"bad face parameter {inputs[1]!r}")
            out = chp.blow_up(a, G)
    except (chp.IncompatibleSigns, chp.InvalidPair, PolytopeError) as exc:
        raise CliError(EXIT_CONSTRUCTION, f"construction failed: {exc}")
    sys.stdout.write(dumps(to_document(out)))
    return EXIT_OK


# -- entry point -----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(EXIT_PARSE, message)


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tnskit", description="TNS analysis of characteristic pairs")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="analyze a characteristic pair")
    c.add_argument("path", help="input document (JSON)")
    helps = {
        "tns": "decide or bound the TNS property",
        "flag": "flag-polytope obstruction (n = 3, toric-like pairs)",
        "signature": "signature and fixed-point signs",
        "cone": "cone of squares in H^4 (n = 3)",
        "volume": "volume polynomial cross-check",
    }
    for flag, text in helps.items():
        c.add_argument(f"--{flag}", action="store_true", help=text)
    c.add_argument("--radius", type=int, default=1, help="coefficient bound for form searches (default 1)")
    c.add_argument("--format", choices=("json", "text"), default="text")
    c.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("example", help="print a builtin document")
    e.add_argument("name")
    e.set_defaults(func=cmd_example)

    k = sub.add_parser("construct", help="build a new pair from documents")
    k.add_argument("op", choices=("product", "connsum", "blowup"))
    k.add_argument("inputs", nargs="+", help="documents and v=I / face=I,J parameters")
    k.set_defaults(func=cmd_construct)
    return p


def main(argv=None) -> int:
    try:
        args = make_parser().parse_args(argv)
        if getattr(args, "radius", 1) < 1:
            raise CliError(EXIT_PARSE, "--radius must be positive")
        return args.func(args)
    except CliError as exc:
        print(f"tnskit: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
