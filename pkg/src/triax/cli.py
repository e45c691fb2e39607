"""Command-line front end.  Every run writes one JSON report.

Exit codes: 0 for a definitive verdict, 2 when the verdict is inconclusive
(fuel ran out), 1 for input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .canonical import cyclic_decomposition, reassemble, shift_block_form
from .centralizer import (
    bilateral_inverse_evidence,
    centralizer_basis,
    closure_poly_membership,
    double_cent_equals_poly,
    double_centralizer_basis,
    laurent_centralizer_probe,
    open_question_probe,
    poly_algebra_basis,
)
from .exactfield import FieldError, Poly
from .fixtures import UnknownFixture, fixtures, load_fixture
from .linspace import SparseVec, SubspaceBasis
from .operators import MatrixOperator, Operator, UndefinedColumn, operator_from_dict
from .oracle import sweep
from .simtri import NonCommuting, OperatorFamily, simultaneous_triangularize
from .triangulate import (
    Diverged,
    closure_test,
    default_fuel,
    invertibility_report,
    is_diagonalizable_locally,
    is_topologically_nilpotent,
    saturate,
    triangularize,
)

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def parse_operator_file(spec: str):
    """Operator (or list of operators) from a file path or ``fixture:NAME``."""
    if spec.startswith("fixture:"):
        return load_fixture(spec.split(":", 1)[1])
    data = _load_json(spec)
    if isinstance(data, list):
        return [operator_from_dict(d) for d in data]
    return operator_from_dict(data)


def _single(op) -> Operator:
    if isinstance(op, list):
        raise InputError("expected a single operator, got a list")
    return op


def _seeds(args, T: Operator):
    if not args.seed:
        return T.default_seeds()
    return [SparseVec.parse(s, T.field, T.domain) for s in args.seed]


def _fuel(args):
    if args.fuel is None:
        return default_fuel()
    if args.fuel < 1:
        raise InputError("--fuel must be at least 1")
    return args.fuel


# ---------------------------------------------------------------------------
# commands; each returns (result dict, definitive flag, one-line summary)


def cmd_triangularize(args):
    T = _single(parse_operator_file(args.operator))
    v = triangularize(T, _seeds(args, T), _fuel(args))
    return v.to_json(), v.definitive, f"triangularize: {v.outcome}", T


def cmd_analyze(args):
    T = _single(parse_operator_file(args.operator))
    seeds, fuel = _seeds(args, T), _fuel(args)
    v = triangularize(T, seeds, fuel)
    out = {"triangularize": v.to_json()}
    out["nilpotence"] = is_topologically_nilpotent(T, seeds, fuel).to_json()
    out["closure"] = closure_test(T, seeds, fuel).to_json()
    if v.hull is not None and v.hull.dim:
        out["diagonalizable_locally"] = is_diagonalizable_locally(v.hull)
    if v.triangularizable and v.hull.dim:
        out["invertibility"] = invertibility_report(T, v.basis, v.hull).to_json()
        blocks = shift_block_form(v.hull)
        out["shift_blocks"] = [b.to_json() for b in blocks]
    return out, v.definitive, f"analyze: {v.outcome}", T


def cmd_simtri(args):
    members = []
    for spec in args.operators:
        op = parse_operator_file(spec)
        members.extend(op if isinstance(op, list) else [op])
    family = OperatorFamily(members)
    T = members[0]
    r = simultaneous_triangularize(family, _seeds(args, T), _fuel(args))
    return r.to_json(), r.outcome != "inconclusive", f"simtri: {r.outcome}", T


def cmd_canonical(args):
    T = _single(parse_operator_file(args.operator))
    W = SubspaceBasis.from_vectors(T.field, T.domain, _seeds(args, T))
    hull = saturate(T, W, _fuel(args))
    from .triangulate import local_min_poly

    mp = local_min_poly(hull)
    p = Poly.parse(args.poly, T.field) if args.poly else mp
    out = {"hull_dim": hull.dim, "min_poly": str(mp)}
    out["cyclic_blocks"] = [b.to_json() for b in cyclic_decomposition(hull, p)]
    from .exactfield import split_linear

    if split_linear(mp).splits:
        blocks = shift_block_form(hull)
        out["shift_blocks"] = [b.to_json() for b in blocks]
        out["reassembles"] = reassemble(hull, blocks)[2]
    else:
        out["shift_blocks"] = None
        out["split_failure"] = str(split_linear(mp).witness)
    return out, True, f"canonical: {len(out['cyclic_blocks'])} cyclic blocks", T


def cmd_centralizer(args):
    T = _single(parse_operator_file(args.operator))
    out = {}
    if args.laurent_radius is not None:
        out["laurent"] = laurent_centralizer_probe(T, args.laurent_radius).to_json()
        if args.inverse_evidence:
            out["inverse_evidence"] = bilateral_inverse_evidence(
                T.field, range(1, args.laurent_radius + 1), _fuel(args))
        return out, True, f"laurent probe: matches={out['laurent']['matches']}", T
    if args.poly_membership:
        S = _single(parse_operator_file(args.poly_membership))
        p = Poly.parse(args.annihilator, T.field) if args.annihilator else None
        m = closure_poly_membership(T, S, _seeds(args, T), p, _fuel(args))
        out["membership"] = m.to_json()
        return out, True, f"poly membership: {m.outcome}", T
    if not isinstance(T, MatrixOperator):
        raise InputError("centralizer bases need a finite matrix operator")
    out["centralizer"] = centralizer_basis(T.rows, T.field).to_json()
    if args.double:
        out["double_centralizer"] = double_centralizer_basis(T.rows, T.field).to_json()
        out["poly_algebra"] = poly_algebra_basis(T.rows, T.field).to_json()
        eq, dims = double_cent_equals_poly(T.rows, T.field)
        out["double_equals_poly"] = {"equal": eq, "dims": list(dims)}
    if args.probe_open_question:
        cands = [MatrixOperator(T.field, X) for X in double_centralizer_basis(T.rows, T.field).elements]
        out["open_question"] = open_question_probe(T, cands, _seeds(args, T), _fuel(args))
    return out, True, f"centralizer: dim {out['centralizer']['dim']}", T


def cmd_nilpotence(args):
    T = _single(parse_operator_file(args.operator))
    v = is_topologically_nilpotent(T, _seeds(args, T), _fuel(args))
    return v.to_json(), v.outcome != "inconclusive", f"nilpotence: {v.outcome}", T


def cmd_closure(args):
    T = _single(parse_operator_file(args.operator))
    v = closure_test(T, _seeds(args, T), _fuel(args))
    return v.to_json(), v.outcome != "inconclusive", f"closure: {v.outcome}", T


def cmd_oracle(args):
    counts = sweep(args.n, args.p)
    bad = counts.pop("disagreements")
    counts["disagreements"] = [[[str(c) for c in r] for r in M] for M in bad]
    passed = not bad and counts["certificates_ok"] == counts["triangularizable"]
    return (counts, True,
            f"oracle sweep n={args.n} p={args.p}: {counts['agree']}/{counts['total']} agree, "
            f"{'pass' if passed else 'FAIL'}", None)


def cmd_fixtures(args):
    cat = fixtures()
    if args.name:
        if args.name not in cat:
            raise UnknownFixture(args.name)
        return {args.name: cat[args.name]}, True, f"fixture {args.name}", None
    return cat, True, f"{len(cat)} fixtures", None


def build_parser():
    ap = argparse.ArgumentParser(prog="triax", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"triax {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, operator=True):
        if operator:
            p.add_argument("operator", help="operator JSON file or fixture:NAME")
        p.add_argument("--seed", action="append", help="seed vector, e.g. '{0: 1, 3: -2/5}' (repeatable)")
        p.add_argument("--fuel", type=int, help="saturation stage budget (default 64 or TRIAX_FUEL)")
        p.add_argument("-o", "--output", help="write the JSON report here instead of stdout")
        p.add_argument("--summary", action="store_true", help="print a one-line summary")

    for name, fn, helptext in [
        ("analyze", cmd_analyze, "full report: verdict, nilpotence, closure, invertibility, blocks"),
        ("triangularize", cmd_triangularize, "certified triangularizing basis"),
        ("canonical", cmd_canonical, "shift-block and cyclic decompositions"),
        ("nilpotence", cmd_nilpotence, "topological nilpotence on probes"),
        ("closure", cmd_closure, "closure membership on probes"),
    ]:
        p = sub.add_parser(name, help=helptext)
        common(p)
        p.set_defaults(func=fn)
        if name == "canonical":
            p.add_argument("--poly", help="annihilating polynomial for the cyclic decomposition")

    p = sub.add_parser("simtri", help="simultaneous triangularization of a commuting family")
    p.add_argument("operators", nargs="+", help="family file (JSON list) or several operator files")
    common(p, operator=False)
    p.set_defaults(func=cmd_simtri)

    p = sub.add_parser("centralizer", help="centralizer algebras and k[T] closure membership")
    common(p)
    p.add_argument("--double", action="store_true", help="also compute C(C(T)) and k[T]")
    p.add_argument("--poly-membership", metavar="S_FILE", help="test S against the closure of k[T]")
    p.add_argument("--annihilator", metavar="POLY", help="declared annihilating polynomial of T")
    p.add_argument("--laurent-radius", type=int, metavar="R", help="Laurent probe of a Z-indexed operator")
    p.add_argument("--inverse-evidence", action="store_true",
                   help="with --laurent-radius: degree-growth evidence for T^-1")
    p.add_argument("--probe-open-question", action="store_true",
                   help="evidence only: C(C(T)) elements against the closure test")
    p.set_defaults(func=cmd_centralizer)

    p = sub.add_parser("oracle", help="brute-force cross-checks")
    osub = p.add_subparsers(dest="oracle_command", required=True)
    s = osub.add_parser("sweep", help="compare verdicts on every n x n matrix over GF(p)")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--p", type=int, default=2)
    common(s, operator=False)
    s.set_defaults(func=cmd_oracle)

    p = sub.add_parser("fixtures", help="list built-in fixtures")
    p.add_argument("name", nargs="?")
    common(p, operator=False)
    p.set_defaults(func=cmd_fixtures)
    return ap


def _emit(report, args):
    text = json.dumps(report, indent=2, sort_keys=False)
    if args.output:
        Path(args.output).write_text(text + "\n")
    elif not args.summary:
        print(text)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    start = time.perf_counter()
    report = {"schema": 1, "version": __version__, "command": args.command}
    try:
        result, definitive, summary, T = args.func(args)
    except (InputError, FieldError, UnknownFixture, UndefinedColumn, NonCommuting,
            Diverged, ValueError) as exc:
        kind = "inconclusive" if isinstance(exc, Diverged) else "input_error"
        report.update(error={"kind": kind, "message": str(exc)})
        if isinstance(exc, Diverged):
            report["trace"] = exc.trace.to_json()
        print(json.dumps(report), file=sys.stderr)
        return EXIT_INCONCLUSIVE if isinstance(exc, Diverged) else EXIT_INPUT
    if T is not None:
        report["operator"] = T.to_dict()
    if getattr(args, "fuel", None) is not None or T is not None:
        report["fuel"] = args.fuel if args.fuel is not None else default_fuel()
    report["result"] = result
    report["elapsed_seconds"] = round(time.perf_counter() - start, 6)
    _emit(report, args)
    if args.summary:
        print(summary)
    return EXIT_OK if definitive else EXIT_INCONCLUSIVE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
