"""
Command line front end.

Exit codes: 0 definite positive result, 1 definite negative, 2 unknown verdict,
3 input error.
"""

from typing import Callable, Dict, List, Optional, Sequence
import argparse
import logging
import sys

from tabulate import tabulate

from .cohomology import classify
from .config import get_caps, set_caps
from .documents import (
    dumps,
    export_fixtures,
    lattice_to_doc,
    load_document,
    monomial_from_doc,
    read_document,
    report_to_doc,
    resolution_to_doc,
    verdict_to_doc,
)
from .errors import BasisSearchExhausted, ClosureExceedsCap, IsoCheckFailed, LatticeError, ParseError
from .exact_linalg import IntMatrix
from .flabby import Basis, No, NotPermutation, Yes, flabby_resolution, permutation_certificate, rho_invertible
from .lattice_core import Isomorphic, Lattice, NotIsomorphic, iso_search
from .monomial_action import MonomialAction, acting_group, exponent_lattice, verify_action
from .paper_models import (
    CATALOG_NAMES,
    case1_lattice,
    case3_iso,
    catalog,
    cyclotomic_identity,
    lambda_lattice,
    reiner_decompose,
    suite,
    verify_case1_iso,
    verify_tables,
)

logger = logging.getLogger(__name__)

EXIT_YES = 0
EXIT_NO = 1
EXIT_UNKNOWN = 2
EXIT_INPUT = 3


class _Parser(argparse.ArgumentParser):
    """Usage errors become input errors with exit code 3."""

    def error(self, message: str):
        raise ParseError(message, location=self.prog)


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _matrix_text(m: IntMatrix) -> str:
    if m.rows == 0 or m.cols == 0:
        return f"({m.rows}x{m.cols})"
    return tabulate(m.to_list(), tablefmt="plain")


def _lattice(path: str) -> Lattice:
    obj = load_document(path)
    if isinstance(obj, MonomialAction):
        return exponent_lattice(obj)
    if not isinstance(obj, Lattice):
        raise ParseError("expected a lattice or monomial document", location=path)
    return obj


def _summary(rows: List[List[object]]) -> str:
    return tabulate(rows, tablefmt="plain")


def _lattice_text(L: Lattice) -> str:
    parts = [_summary([["lattice", L.label or "-"], ["group", str(L.group)], ["order", L.group.order],
                       ["rank", L.rank]])]
    for name, m in zip(L.group.generator_names, L.matrices):
        parts.append(f"\n{name}:\n{_matrix_text(m)}")
    return "\n".join(parts)


# Verbs


def cmd_cohomology(args: argparse.Namespace) -> int:
    L = _lattice(args.lattice)
    report = classify(L, args.jobs)
    if args.json:
        _out(dumps(report_to_doc(report)))
        return EXIT_YES
    rows = [[e.key, e.subgroup.order, " ".join(map(str, e.subgroup.elements)), e.hat_minus1, e.hat0, e.h1]
            for e in report.entries]
    _out(tabulate(rows, headers=["subgroup", "order", "elements", "H^-1", "H^0", "H^1"], tablefmt="grid"))
    return EXIT_YES


def cmd_classify(args: argparse.Namespace) -> int:
    L = _lattice(args.lattice)
    report = classify(L, args.jobs)
    if args.json:
        _out(dumps(report_to_doc(report)))
    else:
        rows = [[e.key, e.subgroup.order, e.hat_minus1, e.h1] for e in report.entries]
        _out(tabulate(rows, headers=["subgroup", "order", "H^-1", "H^1"], tablefmt="grid"))
        _out(_summary([["flabby", report.flabby], ["coflabby", report.coflabby]]))
    return EXIT_YES if report.flabby and report.coflabby else EXIT_NO


def cmd_resolve(args: argparse.Namespace) -> int:
    L = _lattice(args.lattice)
    resolution = flabby_resolution(L, compact=args.compact)
    if args.json:
        _out(dumps(resolution_to_doc(resolution)))
        return EXIT_YES
    cover = ", ".join(f"G/H{H.order}" for H in resolution.cover)
    _out(_summary([["rank M", resolution.M.rank], ["rank P", resolution.P.rank],
                   ["rank E", resolution.E.rank], ["cover", cover or "-"]]))
    _out(f"\ninject M -> P:\n{_matrix_text(resolution.inject.matrix)}")
    _out(f"\nproject P -> E:\n{_matrix_text(resolution.project.matrix)}")
    _out(f"\n{_lattice_text(resolution.E)}")
    return EXIT_YES


def _verdict_code(verdict) -> int:
    if isinstance(verdict, (Yes, Basis, Isomorphic)):
        return EXIT_YES
    if isinstance(verdict, (No, NotPermutation, NotIsomorphic)):
        return EXIT_NO
    return EXIT_UNKNOWN


def cmd_rho(args: argparse.Namespace) -> int:
    L = _lattice(args.lattice)
    result = rho_invertible(L, deflate_kernel=not args.keep_kernel)
    verdict = result.invertible
    if args.json:
        _out(dumps(verdict_to_doc(result, include_resolution=args.resolution)))
        return _verdict_code(verdict)
    rows = [["verdict", verdict.verdict], ["acting group order", result.acting_group.order],
            ["rank E", result.resolution.E.rank]]
    if isinstance(verdict, Yes):
        rows.append(["reason", verdict.reason])
    elif isinstance(verdict, No):
        rows.append(["witness", verdict.witness])
    else:
        rows.append(["reason", verdict.reason])
    if result.conclusion:
        rows.append(["conclusion", result.conclusion])
    _out(_summary(rows))
    return _verdict_code(verdict)


def cmd_cert(args: argparse.Namespace) -> int:
    L = _lattice(args.lattice)
    verdict = permutation_certificate(L, height=args.height, budget=args.budget)
    if args.json:
        _out(dumps(verdict_to_doc(verdict)))
        return _verdict_code(verdict)
    if isinstance(verdict, Basis):
        _out(_summary([["verdict", verdict.verdict], ["orbit stabiliser orders",
                                                       " ".join(map(str, verdict.orbit_types))]]))
        _out(f"\nbasis:\n{_matrix_text(verdict.matrix)}")
    elif isinstance(verdict, NotPermutation):
        _out(_summary([["verdict", verdict.verdict], ["witness", verdict.witness]]))
    else:
        _out(_summary([["verdict", verdict.verdict], ["reason", verdict.reason], ["nodes", verdict.nodes]]))
    return _verdict_code(verdict)


def cmd_reiner(args: argparse.Namespace) -> int:
    L = _lattice(args.lattice)
    try:
        decomposition = reiner_decompose(L)
    except BasisSearchExhausted as exc:
        a, b, c = exc.counts
        if args.json:
            _out(dumps({"counts": {"a": a, "b": b, "c": c}, "basis": None, "error": exc.message}))
        else:
            _out(_summary([["sign", a], ["trivial", b], ["regular", c], ["basis", exc.message]]))
        return EXIT_UNKNOWN
    a, b, c = decomposition.counts
    if args.json:
        _out(dumps({"counts": {"a": a, "b": b, "c": c}, "basis": decomposition.basis.to_list()}))
        return EXIT_YES
    _out(_summary([["sign", a], ["trivial", b], ["regular", c]]))
    _out(f"\nbasis:\n{_matrix_text(decomposition.basis)}")
    return EXIT_YES


def cmd_monomial_verify(args: argparse.Namespace) -> int:
    action = monomial_from_doc(read_document(args.action), location=args.action, verify=False)
    ok, witness = verify_action(action)
    result: Dict[str, object] = {"label": action.label, "verified": ok, "witness": witness}
    if ok:
        try:
            result["group_order"] = (action.group or acting_group(action)).order
        except ClosureExceedsCap:
            result["group_order"] = None
        result["purely_monomial"] = action.is_purely_monomial()
        if args.lattice_out:
            result["exponent_lattice"] = lattice_to_doc(exponent_lattice(action))
    if args.json:
        _out(dumps(result))
    else:
        _out(_summary([[key, "-" if value is None else value] for key, value in result.items()
                       if key != "exponent_lattice"]))
        if ok and args.lattice_out:
            _out(f"\n{_lattice_text(exponent_lattice(action))}")
    return EXIT_YES if ok else EXIT_NO


def cmd_iso(args: argparse.Namespace) -> int:
    A, B = _lattice(args.left), _lattice(args.right)
    verdict = iso_search(A, B, height=args.height, budget=args.budget)
    if args.json:
        _out(dumps(verdict_to_doc(verdict)))
    elif isinstance(verdict, Isomorphic):
        _out(_summary([["verdict", verdict.verdict]]))
        _out(f"\nintertwiner:\n{_matrix_text(verdict.matrix)}")
    elif isinstance(verdict, NotIsomorphic):
        _out(_summary([["verdict", verdict.verdict], ["witness", verdict.witness]]))
    else:
        _out(_summary([["verdict", verdict.verdict], ["reason", verdict.reason], ["nodes", verdict.nodes]]))
    return _verdict_code(verdict)


def _params(items: Sequence[str]) -> Dict[str, object]:
    params: Dict[str, object] = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ParseError(f"parameter must look like key=value, got {item!r}", location=item)
        params[key] = int(value) if value.lstrip("-").isdigit() else value
    return params


def cmd_catalog(args: argparse.Namespace) -> int:
    if args.name is None:
        _out("\n".join(CATALOG_NAMES))
        return EXIT_YES
    L = catalog(args.name, **_params(args.param))
    _out(dumps(lattice_to_doc(L)) if args.json else _lattice_text(L))
    return EXIT_YES


# Paper sub-verbs


def paper_case1(args: argparse.Namespace) -> int:
    M = case1_lattice(args.p)
    iso = None
    if args.verify_iso:
        try:
            iso = verify_case1_iso(args.p)
        except IsoCheckFailed as exc:
            _out(f"isomorphism check failed: {exc}")
            return EXIT_NO
    if args.json:
        doc = {"lattice": lattice_to_doc(M)}
        if iso is not None:
            doc["intertwiner"] = iso.matrix.to_list()
            doc["det"] = iso.matrix.det()
        _out(dumps(doc))
        return EXIT_YES
    _out(_lattice_text(M))
    if iso is not None:
        _out(f"\nLambda -> M intertwiner (det {iso.matrix.det()}):\n{_matrix_text(iso.matrix)}")
    return EXIT_YES


def paper_lambda(args: argparse.Namespace) -> int:
    L = lambda_lattice(args.p)
    _out(dumps(lattice_to_doc(L)) if args.json else _lattice_text(L))
    return EXIT_YES


def paper_cyclotomic(args: argparse.Namespace) -> int:
    holds = cyclotomic_identity(args.p)
    if args.json:
        _out(dumps({"p": args.p, "identity": holds}))
    else:
        _out(_summary([["p", args.p], ["Phi_p(T^2) = Phi_p(T) Phi_2p(T)", holds]]))
    return EXIT_YES if holds else EXIT_NO


def paper_case3_iso(args: argparse.Namespace) -> int:
    verdict = case3_iso(args.p, height=args.height, budget=args.budget)
    if args.json:
        _out(dumps(verdict_to_doc(verdict)))
    else:
        rows = [["p", args.p], ["verdict", verdict.verdict]]
        if isinstance(verdict, NotIsomorphic):
            rows.append(["witness", verdict.witness])
        elif not isinstance(verdict, Isomorphic):
            rows.append(["reason", verdict.reason])
        _out(_summary(rows))
        if isinstance(verdict, Isomorphic):
            _out(f"\nintertwiner:\n{_matrix_text(verdict.matrix)}")
    return _verdict_code(verdict)


def paper_tables(args: argparse.Namespace) -> int:
    results = verify_tables(args.p)
    if args.json:
        _out(dumps({name: {"verified": ok, "witness": witness} for name, (ok, witness) in results.items()}))
    else:
        rows = [[name, ok, witness or ""] for name, (ok, witness) in results.items()]
        _out(tabulate(rows, headers=["table", "verified", "witness"], tablefmt="grid"))
    return EXIT_YES if all(ok for ok, _ in results.values()) else EXIT_NO


def paper_fixtures(args: argparse.Namespace) -> int:
    written = export_fixtures(args.p, args.out)
    if args.json:
        _out(dumps({"written": [str(path) for path in written]}))
    else:
        _out("\n".join(str(path) for path in written))
    return EXIT_YES


def paper_suite(args: argparse.Namespace) -> int:
    results = suite(args.primes, args.jobs)
    if args.json:
        _out(dumps({str(p): checks for p, checks in results.items()}))
    else:
        checks = list(next(iter(results.values())).keys()) if results else []
        rows = [[p] + [results[p][name] for name in checks] for p in results]
        _out(tabulate(rows, headers=["p"] + checks, tablefmt="grid"))
    return EXIT_YES if all(all(checks.values()) for checks in results.values()) else EXIT_NO


# Parser


def _common() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="Write JSON instead of tables")
    common.add_argument("--jobs", type=int, default=None, help="Worker threads for sweeps")
    common.add_argument("--log-level", default=None, help="Logging level (default from LATNOETHER_LOG_LEVEL)")
    common.add_argument("--height", type=int, default=None, help="Height bound for searches")
    common.add_argument("--budget", type=int, default=None, help="Node budget for searches")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="latnoether", description="Exact computations with integral lattices of finite groups.")
    verbs = parser.add_subparsers(dest="verb", metavar="verb")
    verbs.required = True

    def verb(name: str, handler: Callable[[argparse.Namespace], int], help_text: str) -> argparse.ArgumentParser:
        sub = verbs.add_parser(name, parents=[common], help=help_text, description=help_text)
        sub.set_defaults(handler=handler)
        return sub

    for name, handler, help_text in [
        ("cohomology", cmd_cohomology, "Tate cohomology table over subgroup classes"),
        ("classify", cmd_classify, "Flabby and coflabby test"),
        ("resolve", cmd_resolve, "Flabby resolution 0 -> M -> P -> E -> 0"),
        ("rho", cmd_rho, "Invertibility of the flabby class"),
        ("cert", cmd_cert, "Search for a permutation basis"),
        ("reiner", cmd_reiner, "Sign, trivial and regular summands of a C2-lattice"),
    ]:
        sub = verb(name, handler, help_text)
        sub.add_argument("--lattice", required=True, help="Lattice or monomial document, or a fixture name")
        if name == "resolve":
            sub.add_argument("--compact", action="store_true", help="Use the compact permutation cover")
        if name == "rho":
            sub.add_argument("--keep-kernel", action="store_true", help="Do not divide out the trivially acting subgroup")
            sub.add_argument("--resolution", action="store_true", help="Embed the resolution in JSON output")

    sub = verb("monomial-verify", cmd_monomial_verify, "Check a monomial action against its relations")
    sub.add_argument("--action", required=True, help="Monomial document or fixture name")
    sub.add_argument("--lattice-out", action="store_true", help="Also print the exponent lattice")

    sub = verb("iso", cmd_iso, "Search for an isomorphism of lattices")
    sub.add_argument("--left", required=True)
    sub.add_argument("--right", required=True)

    sub = verb("catalog", cmd_catalog, "Named lattices")
    sub.add_argument("name", nargs="?", default=None, help="Catalog entry; omit to list the names")
    sub.add_argument("--param", action="append", default=[], help="Parameter as key=value, repeatable")

    paper = verbs.add_parser("paper", help="Named lattices and identities of the rationality arguments")
    topics = paper.add_subparsers(dest="topic", metavar="topic")
    topics.required = True

    def topic(name: str, handler: Callable[[argparse.Namespace], int], help_text: str,
              with_p: bool = True) -> argparse.ArgumentParser:
        sub = topics.add_parser(name, parents=[common], help=help_text, description=help_text)
        sub.set_defaults(handler=handler)
        if with_p:
            sub.add_argument("--p", type=int, required=True, help="Odd prime")
        return sub

    topic("case1", paper_case1, "The lattice M of the first case").add_argument(
        "--verify-iso", action="store_true", help="Certify M = Lambda by the orbit of u1 - w1")
    topic("lambda", paper_lambda, "Z[T]/(Phi_p(T) Phi_2p(T)) as a lattice")
    topic("cyclotomic", paper_cyclotomic, "Check Phi_p(T^2) = Phi_p(T) Phi_2p(T)")
    topic("case3-iso", paper_case3_iso, "Search for M + M = Lambda + Lambda")
    topic("tables", paper_tables, "Verify every monomial table")
    topic("fixtures", paper_fixtures, "Write the fixture documents").add_argument(
        "--out", required=True, help="Output directory")
    topic("suite", paper_suite, "Lattice checks over several primes", with_p=False).add_argument(
        "--primes", type=int, nargs="+", default=[3, 5, 7], help="Odd primes (default 3 5 7)")
    return parser


def _configure(args: argparse.Namespace) -> None:
    caps = get_caps().replace(height=args.height, budget=args.budget, jobs=args.jobs)
    set_caps(caps)
    level = (args.log_level or caps.log_level).upper()
    if not isinstance(logging.getLevelName(level), int):
        raise ParseError(f"unknown log level {args.log_level!r}", location="--log-level")
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _configure(args)
        return args.handler(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    except LatticeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
