"""Command-line front end.

Every subcommand prints exactly one JSON document (or a table/CSV with
``--format``).  Exit codes: 0 ok, 1 verification failure, 2 unparseable
input, 3 precondition violation, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

from . import jsonio
from .checks import run_suite
from .dalgebra import DAlgOperator, apply_operator, as_matrix, membership
from .distances import all_distances
from .errors import NotInAlgebra, NumericalFailure, PolyPerturbError
from .kfunctionals import k_bounds_t13, k_F_vs_k_H_factor, k_H_exact, k_h_exact
from .roots import DEFAULT_TOL, find_roots
from .search import DISTANCES, STRATEGIES, SearchConfig, classify, empirical_sup
from .star import check_composite_containment, check_grace

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_PRECONDITION, EXIT_NUMERICAL = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _common(defaults: bool) -> argparse.ArgumentParser:
    """Global flags; accepted before or after the subcommand."""
    # the subcommand copy must not overwrite values given before the subcommand
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--n", type=int, default=d(None), help="ambient degree when the input omits it")
    p.add_argument("--tol", type=float, default=d(None),
                   help="solver tolerance (roots) or containment slack (grace)")
    p.add_argument("--format", choices=("json", "csv", "table"), default=d("json"))
    p.add_argument("--seed", type=int, default=d(0))
    return p


def _search_flags(p: argparse.ArgumentParser):
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--radius", type=float, default=2.0)
    p.add_argument("--strategies", default=",".join(STRATEGIES),
                   help="comma-separated subset of " + ",".join(STRATEGIES))
    p.add_argument("--hill-steps", type=int, default=50)
    p.add_argument("--step-scale", type=float, default=0.1)


def build_parser() -> argparse.ArgumentParser:
    common = _common(False)
    parser = argparse.ArgumentParser(prog="polyperturb", parents=[_common(True)],
                                     description="Root perturbation under linear operators on polynomials.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("apply", parents=[common], help="apply an operator to a polynomial")
    p.add_argument("operator")
    p.add_argument("poly")

    p = sub.add_parser("roots", parents=[common], help="root multiset of a polynomial")
    p.add_argument("poly")

    p = sub.add_parser("dist", parents=[common], help="distances between two root multisets")
    p.add_argument("a", help="polynomial or root multiset")
    p.add_argument("b", help="polynomial or root multiset")

    p = sub.add_parser("bounds", parents=[common], help="exact constants and factor bounds")
    p.add_argument("operator")

    p = sub.add_parser("classify", parents=[common], help="Grace / NotGrace verdict")
    p.add_argument("operator")
    p.add_argument("--no-search", action="store_true", help="skip the empirical evidence")
    _search_flags(p)

    p = sub.add_parser("search", parents=[common], help="empirical displacement supremum")
    p.add_argument("operator")
    p.add_argument("--dist", choices=tuple(DISTANCES), default="h")
    _search_flags(p)

    p = sub.add_parser("grace", parents=[common], help="containment check for a pair f, g")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("domain")
    p.add_argument("--check", choices=("apolar", "composite"), default="apolar",
                   help="apolar-pair root location, or roots of the product")

    p = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    p.add_argument("--suite", choices=("examples", "theorems", "all"), default="all")
    return parser


def _config(args) -> SearchConfig:
    strategies = tuple(s for s in args.strategies.split(",") if s)
    try:
        return SearchConfig(seed=args.seed, trials=args.trials, radius=args.radius,
                            strategies=strategies, hill_steps=args.hill_steps,
                            step_scale=args.step_scale)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _operator(text, n):
    return jsonio.dec_operator(jsonio.load_document(text), n)


def _poly(text, n):
    return jsonio.dec_poly(jsonio.load_document(text), n)


def _multiset_or_roots(text, n, tol):
    doc = jsonio.load_document(text)
    if isinstance(doc, dict) and "kind" in doc and "coeffs" not in doc:
        return jsonio.dec_multiset(doc)
    return find_roots(jsonio.dec_poly(doc, n), tol=tol)


def _report(rep) -> dict:
    return {"passed": rep.passed, "worst_margin": rep.worst_margin, "tol": rep.tol,
            "worst_point": rep.worst_point, "witness": rep.witness, "details": rep.details}


def cmd_apply(args):
    op = _operator(args.operator, args.n)
    return jsonio.enc_poly(apply_operator(op, _poly(args.poly, op.cap))), EXIT_OK


def cmd_roots(args):
    p = _poly(args.poly, args.n)
    return jsonio.enc_multiset(find_roots(p, tol=args.tol or DEFAULT_TOL)), EXIT_OK


def cmd_dist(args):
    tol = args.tol or DEFAULT_TOL
    out = all_distances(_multiset_or_roots(args.a, args.n, tol),
                        _multiset_or_roots(args.b, args.n, tol))
    return out, EXIT_OK


def _as_dalg(op) -> DAlgOperator:
    return op if isinstance(op, DAlgOperator) else membership(as_matrix(op))


def cmd_bounds(args):
    T = _as_dalg(_operator(args.operator, args.n))
    return {"K_h_exact": k_h_exact(T), "K_H_exact": k_H_exact(T),
            "t13": k_bounds_t13(T).as_dict(),
            "krks_factor": k_F_vs_k_H_factor(T.cap) if T.cap >= 2 else None}, EXIT_OK


def cmd_classify(args):
    verdict = classify(_operator(args.operator, args.n), _config(args), search=not args.no_search)
    return verdict.as_dict(), EXIT_OK


def cmd_search(args):
    return empirical_sup(_operator(args.operator, args.n), args.dist, _config(args)).as_dict(), EXIT_OK


def cmd_grace(args):
    f, g = _poly(args.f, args.n), _poly(args.g, args.n)
    omega = jsonio.dec_domain(jsonio.load_document(args.domain))
    check = check_grace if args.check == "apolar" else check_composite_containment
    rep = check(f, g, omega, tol=args.tol)
    return _report(rep), EXIT_OK


def cmd_verify(args):
    results = run_suite(args.suite, args.seed)
    passed = all(r.passed for r in results)
    doc = {"suite": args.suite, "seed": args.seed, "passed": passed,
           "checks": [r.as_dict() for r in results]}
    return doc, EXIT_OK if passed else EXIT_VERIFY


COMMANDS = {"apply": cmd_apply, "roots": cmd_roots, "dist": cmd_dist, "bounds": cmd_bounds,
            "classify": cmd_classify, "search": cmd_search, "grace": cmd_grace,
            "verify": cmd_verify}


def _rows(doc) -> list[tuple[str, object]]:
    """Flatten a document into ``(dotted key, value)`` rows."""
    rows = []

    def walk(prefix, x):
        if isinstance(x, dict):
            for k in sorted(x):
                walk(f"{prefix}.{k}" if prefix else str(k), x[k])
        elif isinstance(x, list) and x and all(isinstance(v, (dict, list)) for v in x) \
                and not all(isinstance(v, list) and len(v) == 2 and
                            all(not isinstance(c, (dict, list)) for c in v) for v in x):
            for i, v in enumerate(x):
                walk(f"{prefix}.{i}", v)
        else:
            rows.append((prefix, x))

    walk("", jsonio.to_jsonable(doc))
    return rows


def render(doc, fmt: str, command: str) -> str:
    if fmt == "json":
        return jsonio.dumps(doc)
    if command == "verify":
        header = ["number", "name", "passed", "claim", "expected", "observed", "margin"]
        rows = [[c[h] for h in header] for c in jsonio.to_jsonable(doc)["checks"]]
    else:
        header = ["key", "value"]
        rows = [[k, v] for k, v in _rows(doc)]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    if command == "verify":
        return "\n".join(f"{'PASS' if r[2] else 'FAIL'}  {r[0]:>2}  {r[1]:<24} {r[5]}" for r in rows)
    width = max((len(str(k)) for k, _ in rows), default=0)
    return "\n".join(f"{str(k):<{width}}  {v}" for k, v in rows)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_PARSE
    try:
        doc, code = COMMANDS[args.command](args)
    except (jsonio.SchemaError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (PolyPerturbError, NotInAlgebra, ValueError) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    print(render(doc, args.format, args.command))
    return code


if __name__ == "__main__":
    sys.exit(main())
