"""``mcop`` command-line interface.

Exit codes:

====  ==========================================================
0     success
1     a requested check reported FAIL
2     usage or document parse error
3     poset or marking invariant violated (the invariant is named)
4     polyhedron is unbounded
5     point is not in the polytope
6     marked poset is not regular (audit mode)
7     ambient dimension exceeds ``MCOP_MAX_DIM``
====  ==========================================================
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections.abc import Sequence
from fractions import Fraction

from .decomposition import PointDecomposition, decompose_co_point, verify_cone_additivity, verify_minkowski
from .document import PosetDocument, format_rational, load_document
from .ehrhart import (
    AuditReport,
    ReflexivityReport,
    check_reciprocity,
    ehrhart_polynomial,
    hibi_criterion,
    is_reflexive,
    theorem_main_audit,
)
from .errors import (
    DocumentError,
    EmptyPolyhedron,
    MarkingError,
    MarkingsNotInCommonCell,
    McopError,
    NonIntegralInput,
    NotFullDimensional,
    NotRegular,
    PointNotInPolyhedron,
    PosetError,
    Unbounded,
)
from .marked import ChainOrderPartition, all_partitions, make_partition
from .polyhedron import (
    LinearConstraint,
    build_polyhedron,
    dilate,
    dimension,
    facets,
    interior_lattice_points,
    lattice_points,
)

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_INVARIANT = 0, 1, 2, 3
EXIT_UNBOUNDED, EXIT_NOT_IN_POLYTOPE, EXIT_NOT_REGULAR, EXIT_DIM_CAP = 4, 5, 6, 7
DEFAULT_MAX_DIM = 12


class CliError(Exception):
    def __init__(self, code: int, message: str, invariant: str | None = None):
        super().__init__(message)
        self.code = code
        self.invariant = invariant


# -- exact formatting -----------------------------------------------------------


def exact(v):
    """JSON value for a rational: int when integral, else ``"p/q"``."""
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def fmt_point(x: Sequence) -> str:
    return "(" + ", ".join(format_rational(v) for v in x) + ")"


def constraint_json(c: LinearConstraint) -> dict:
    return {
        "coefficients": {k: exact(v) for k, v in c.coeffs},
        "rhs": exact(c.rhs),
        "kind": c.kind,
        "tag": c.tag,
        "text": str(c),
    }


def filter_label(marking) -> str:
    return "{" + ",".join(a for a, v in marking if v) + "}"


# -- shared plumbing -------------------------------------------------------------


def _max_dim() -> int:
    raw = os.environ.get("MCOP_MAX_DIM")
    if raw is None or raw == "":
        return DEFAULT_MAX_DIM
    try:
        value = int(raw)
    except ValueError:
        raise CliError(EXIT_PARSE, f"MCOP_MAX_DIM must be an integer, got {raw!r}") from None
    if value < 0:
        raise CliError(EXIT_PARSE, "MCOP_MAX_DIM must be nonnegative")
    return value


def _check_dim(doc: PosetDocument) -> None:
    n = len(doc.marked_poset.unmarked)
    cap = _max_dim()
    if n > cap:
        raise CliError(EXIT_DIM_CAP, f"{n} coordinates exceed MCOP_MAX_DIM={cap}")


def _load(args) -> PosetDocument:
    doc = load_document(args.file)
    if getattr(args, "chain", None) is not None:
        chain = [x.strip() for x in args.chain.split(",") if x.strip()]
        mp = doc.marked_poset
        unknown = set(chain) - set(mp.unmarked)
        if unknown:
            raise CliError(EXIT_PARSE, f"--chain names non-coordinates {sorted(unknown)}")
        doc = PosetDocument(mp, make_partition(mp, chain))
    return doc


def _parse_point(text: str) -> tuple[Fraction, ...]:
    body = text.strip().strip("()[]")
    parts = [p for p in body.replace(" ", ",").split(",") if p]
    try:
        return tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError):
        raise CliError(EXIT_PARSE, f"cannot parse point {text!r}") from None


class Output:
    """Collects text lines and a JSON payload; emitted once at the end."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: list[str] = []
        self.data: dict = {}

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def emit(self, stream) -> None:
        if self.as_json:
            stream.write(json.dumps(self.data, indent=2, ensure_ascii=False) + "\n")
        elif self.lines:
            stream.write("\n".join(self.lines) + "\n")


# -- commands ----------------------------------------------------------------------


def cmd_build(args, out: Output) -> int:
    doc = _load(args)
    h = build_polyhedron(doc.marked_poset, doc.partition)
    cons = [c for _, c in facets(h)] if args.facets_only else list(h.constraints)
    out.data = {
        "command": "build",
        "coords": list(h.coords),
        "partition": _partition_json(doc.partition),
        "facets_only": bool(args.facets_only),
        "constraints": [constraint_json(c) for c in cons],
    }
    width = max((len(str(c)) for c in cons), default=0)
    for c in cons:
        out.line(f"{str(c):<{width}}  [{c.tag}]")
    return EXIT_OK


def cmd_points(args, out: Output) -> int:
    doc = _load(args)
    _check_dim(doc)
    m = args.dilate
    if m < 0:
        raise CliError(EXIT_PARSE, "--dilate must be nonnegative")
    h = dilate(doc.marked_poset, doc.partition, m)
    pts = interior_lattice_points(h, check_full_dimensional=False) if args.interior else lattice_points(h)
    out.data = {
        "command": "points",
        "coords": list(h.coords),
        "partition": _partition_json(doc.partition),
        "interior": bool(args.interior),
        "dilate": m,
        "points": [list(p) for p in pts],
        "count": len(pts),
    }
    for p in pts:
        out.line(fmt_point(p))
    out.line(f"count: {len(pts)}")
    return EXIT_OK


def _decomposition_json(x, dec: PointDecomposition) -> dict:
    return {
        "point": [exact(v) for v in x],
        "summands": [
            {
                "weight": s.weight,
                "index": s.index,
                "filter": [a for a, v in s.marking if v],
                "point": list(s.point),
            }
            for s in dec.summands
        ],
    }


def cmd_decompose(args, out: Output) -> int:
    doc = _load(args)
    _check_dim(doc)
    mp, part = doc.marked_poset, doc.partition
    if args.all == (args.point is not None):
        raise CliError(EXIT_PARSE, "give either a point or --all")
    h = build_polyhedron(mp, part)
    targets = lattice_points(h) if args.all else [_parse_point(args.point)]
    results = []
    for x in targets:
        dec = decompose_co_point(mp, part, x)
        lam, total = dec.reconstruct()
        ok = total == tuple(int(v) for v in x) and lam == {a: int(v) for a, v in mp.marking.items()}
        results.append((x, dec, ok))
    out.data = {
        "command": "decompose",
        "coords": list(h.coords),
        "partition": _partition_json(part),
        "decompositions": [_decomposition_json(x, dec) for x, dec, _ in results],
        "verified": all(ok for *_, ok in results),
    }
    for x, dec, ok in results:
        out.line(f"point {fmt_point(x)}")
        for s in dec.summands:
            name = "base" if s.index == 0 else f"omega_{s.index}"
            out.line(f"  {s.weight} x {name} F={filter_label(s.marking)} {fmt_point(s.point)}")
        out.line(f"  reconstruction: {'ok' if ok else 'FAILED'}")
    out.line(f"verified: {len(results)} decomposition(s), {'all ok' if out.data['verified'] else 'FAILURES'}")
    return EXIT_OK if out.data["verified"] else EXIT_FAIL


def _partition_json(part: ChainOrderPartition) -> dict:
    return {"chain": sorted(part.chain), "order": sorted(part.order)}


def _report_json(r: ReflexivityReport) -> dict:
    return {
        "partition": _partition_json(r.partition),
        "dimension": r.dimension,
        "interior_points": [list(p) for p in r.interior_points],
        "interior_count": len(r.interior_points),
        "unique_interior": r.unique_interior,
        "lattice_polytope": r.lattice_polytope,
        "reflexive": r.reflexive,
        "hibi_holds": r.hibi_holds,
        "failing_facet": None if r.failing_facet is None else constraint_json(r.failing_facet),
        "ehrhart": [exact(c) for c in r.ehrhart.coefficients],
    }


def _report_row(r: ReflexivityReport) -> str:
    facet = f"  failing facet: {r.failing_facet}" if r.failing_facet is not None else ""
    verdict = "reflexive" if r.reflexive else "not reflexive"
    return f"{r.partition.label():<24} interior={len(r.interior_points)}  {verdict}{facet}"


def cmd_reflexive(args, out: Output) -> int:
    doc = _load(args)
    _check_dim(doc)
    mp = doc.marked_poset
    if args.all_partitions:
        try:
            audit: AuditReport = theorem_main_audit(mp, all_partitions(mp))
        except NotRegular as exc:
            raise CliError(EXIT_NOT_REGULAR, str(exc), exc.invariant) from exc
        out.data = {
            "command": "reflexive",
            "audit": True,
            "rows": [_report_json(r) for r in audit.rows],
            "rank_marking": audit.rank_marking,
            "all_reflexive": audit.statement,
            "agreement": audit.agreement,
        }
        for r in audit.rows:
            out.line(_report_row(r))
        out.line(
            f"rank marking: {str(audit.rank_marking).lower()}; "
            f"unique interior point and reflexive for all partitions: {str(audit.statement).lower()}; "
            f"agreement: {'PASS' if audit.agreement else 'FAIL'}"
        )
        return EXIT_OK if audit.agreement else EXIT_FAIL
    r = is_reflexive(mp, doc.partition)
    out.data = {"command": "reflexive", "audit": False, "rows": [_report_json(r)]}
    out.line(_report_row(r))
    out.line(f"interior points: {', '.join(fmt_point(p) for p in r.interior_points) or 'none'}")
    out.line(f"hibi criterion: {str(r.hibi_holds).lower()}")
    return EXIT_OK


def cmd_ehrhart(args, out: Output) -> int:
    doc = _load(args)
    _check_dim(doc)
    mp = doc.marked_poset
    parts = all_partitions(mp) if args.check_equivalence else [doc.partition]
    dim = dimension(build_polyhedron(mp, doc.partition))
    polys = [(p, ehrhart_polynomial(mp, p, dim)) for p in parts]
    L = polys[0][1]
    out.data = {
        "command": "ehrhart",
        "dimension": dim,
        "polynomials": [
            {"partition": _partition_json(p), "coefficients": [exact(c) for c in poly.coefficients]}
            for p, poly in polys
        ],
    }
    for p, poly in polys:
        coeffs = ", ".join(format_rational(c) for c in poly.coefficients)
        out.line(f"{p.label():<24} [{coeffs}]  L(m) = {poly}")
    code = EXIT_OK
    if args.check_equivalence:
        same = all(poly == L for _, poly in polys)
        out.data["equivalence"] = same
        out.line(f"equivalence over {len(polys)} partitions: {'PASS' if same else 'FAIL'}")
        code = code if same else EXIT_FAIL
    if args.check_reciprocity is not None:
        ok = check_reciprocity(mp, doc.partition, args.check_reciprocity)
        out.data["reciprocity"] = ok
        out.line(f"reciprocity for m=1..{args.check_reciprocity}: {'PASS' if ok else 'FAIL'}")
        code = code if ok else EXIT_FAIL
    if args.hibi:
        verdict = hibi_criterion(L, dim)
        out.data["hibi"] = verdict
        out.line(f"hibi criterion: {str(verdict).lower()}")
    return code


def cmd_verify(args, out: Output) -> int:
    doc = _load(args)
    _check_dim(doc)
    mp = doc.marked_poset
    parts = all_partitions(mp) if args.all_partitions else [doc.partition]
    rows = []
    for part in parts:
        rep = verify_minkowski(mp, part)
        rows.append(
            {
                "partition": _partition_json(part),
                "equal": rep.equal,
                "lattice_points": rep.lhs_count,
                "sumset_points": rep.rhs_count,
                "decomposition_failures": len(rep.failures),
                "ok": rep.ok,
            }
        )
        out.line(
            f"{part.label():<24} points={rep.lhs_count} sumset={rep.rhs_count} "
            f"decompositions={'ok' if not rep.failures else len(rep.failures)} {'PASS' if rep.ok else 'FAIL'}"
        )
    out.data = {"command": "verify", "minkowski": rows}
    ok = all(r["ok"] for r in rows)
    if args.additivity:
        other = load_document(args.additivity).marked_poset
        rep = verify_cone_additivity(mp, other, None, doc.partition)
        out.data["additivity"] = {
            "equal": rep.equal,
            "lattice_points": rep.lhs_count,
            "sumset_points": rep.rhs_count,
            "redistributed": rep.redistributed,
            "counterexample": None if rep.counterexample is None else list(rep.counterexample),
        }
        good = rep.equal and not rep.failures
        out.line(
            f"cone additivity: points={rep.lhs_count} sumset={rep.rhs_count} "
            f"redistributed={rep.redistributed} {'PASS' if good else 'FAIL'}"
        )
        ok = ok and good
    out.data["ok"] = ok
    return EXIT_OK if ok else EXIT_FAIL


# -- argument parsing ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mcop",
        description="Marked chain-order polytopes: build, count, decompose, classify.",
        epilog="exit codes: 1 check failed, 2 parse error, 3 invariant violated, 4 unbounded, "
        "5 point not in polytope, 6 not regular, 7 dimension cap (MCOP_MAX_DIM)",
    )
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="marked poset document")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--chain", metavar="LABELS", help="comma-separated chain elements (overrides the file)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("build", parents=[common], help="print the inequality description")
    p.add_argument("--facets-only", action="store_true", help="drop redundant inequalities")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("points", parents=[common], help="list lattice points")
    p.add_argument("--interior", action="store_true", help="interior lattice points only")
    p.add_argument("--dilate", type=int, default=1, metavar="M", help="use the M-th dilate")
    p.set_defaults(func=cmd_points)

    p = sub.add_parser("decompose", parents=[common], help="split lattice points into elementary pieces")
    p.add_argument("point", nargs="?", help="comma-separated coordinates, e.g. 1,2")
    p.add_argument("--all", action="store_true", help="decompose every lattice point")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("reflexive", parents=[common], help="reflexivity report")
    p.add_argument("--all-partitions", action="store_true", help="audit every chain-order partition")
    p.set_defaults(func=cmd_reflexive)

    p = sub.add_parser("ehrhart", parents=[common], help="Ehrhart polynomial")
    p.add_argument("--check-equivalence", action="store_true", help="compare all partitions")
    p.add_argument("--check-reciprocity", type=int, metavar="M", help="compare with interior counts up to M")
    p.add_argument("--hibi", action="store_true", help="evaluate the reflexivity symmetry criterion")
    p.set_defaults(func=cmd_ehrhart)

    p = sub.add_parser("verify", parents=[common], help="check the elementary Minkowski decomposition")
    p.add_argument("--all-partitions", action="store_true", help="check every chain-order partition")
    p.add_argument("--additivity", metavar="OTHER", help="also check O(λ+μ) = O(λ) + O(μ) with OTHER's marking")
    p.set_defaults(func=cmd_verify)
    return parser


def _classify(exc: Exception) -> CliError:
    if isinstance(exc, CliError):
        return exc
    if isinstance(exc, DocumentError):
        return CliError(EXIT_PARSE, str(exc))
    if isinstance(exc, Unbounded):
        return CliError(EXIT_UNBOUNDED, str(exc))
    if isinstance(exc, PointNotInPolyhedron):
        return CliError(EXIT_NOT_IN_POLYTOPE, str(exc))
    if isinstance(exc, MarkingError):
        return CliError(EXIT_INVARIANT, str(exc), exc.invariant)
    if isinstance(exc, PosetError):
        return CliError(EXIT_INVARIANT, str(exc), "P is a partial order violated")
    if isinstance(exc, NonIntegralInput):
        return CliError(EXIT_INVARIANT, str(exc), "integral input violated")
    if isinstance(exc, MarkingsNotInCommonCell):
        return CliError(EXIT_INVARIANT, str(exc), "common refinement of ideal chains violated")
    if isinstance(exc, (NotFullDimensional, EmptyPolyhedron)):
        return CliError(EXIT_INVARIANT, str(exc), "polytope full-dimensional violated")
    if isinstance(exc, McopError):
        return CliError(EXIT_INVARIANT, str(exc))
    raise exc


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Output(args.json)
    try:
        code = args.func(args, out)
    except Exception as exc:  # noqa: BLE001 - mapped to documented exit codes
        err = _classify(exc)
        if args.json:
            stdout.write(
                json.dumps(
                    {"error": {"code": err.code, "message": str(err), "invariant": err.invariant}},
                    ensure_ascii=False,
                )
                + "\n"
            )
        else:
            detail = f" ({err.invariant})" if err.invariant and err.invariant != str(err) else ""
            stderr.write(f"mcop: error: {err}{detail}\n")
        return err.code
    out.emit(stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
