"""Batch CLI: a thin client that posts to the workbench service.

By default requests go to the FastAPI app in-process; with --server URL they
go to a running instance instead. Exit codes: 0 success/sat, 1 unsat/refuted,
2 unknown (budget exhausted), 3 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(3)


FORMULA_HELP = """\
formula syntax:
  forall x. p   exists x. p   forall {x,y}. p
  p & q   p | q   ~p   p -> q   true   false   t1 = t2   P(t1,...,tn)
  precedence: ~ binds over &, & over |, | over ->; quantifiers bind weakest;
  parentheses are always accepted. Constants are written c().
"""


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quantkit", description=__doc__, epilog=FORMULA_HELP,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--server", metavar="URL",
                        help="send requests to a running service instead of in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="echo the normalized formula and its free variables")
    p.add_argument("formula", help="formula text, or - for stdin")
    p.add_argument("--sig", metavar="FILE", help="signature file")

    p = sub.add_parser("subst", help="apply a capture-avoiding substitution")
    p.add_argument("formula", help="formula text, or - for stdin")
    p.add_argument("--map", required=True, metavar="MAP",
                   help="bindings like \"x:=f(y), y:=c()\"")
    p.add_argument("--sig", metavar="FILE")

    p = sub.add_parser("eval", help="evaluate a formula in a model")
    p.add_argument("formula", help="formula text, or - for stdin")
    p.add_argument("--model", required=True, metavar="FILE")
    p.add_argument("--val", default="", metavar="VAL", help="valuation like \"x:=a\"")
    p.add_argument("--sig", metavar="FILE")

    p = sub.add_parser("axioms", help="run the law suites against a model")
    p.add_argument("--model", required=True, metavar="FILE")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--suite", action="append", dest="suites", metavar="NAME",
                   choices=("clone", "quantifier", "equality", "polyadic", "all"),
                   help="repeatable; default: all suites the model supports")

    p = sub.add_parser("henkin", help="witness-based model construction")
    p.add_argument("--formulas", required=True, metavar="SRC",
                   help="formula text, a file path, or - for stdin; "
                        "separate formulas with ; or newlines")
    p.add_argument("--rounds", type=int, default=2)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--max-size", type=int, default=None, dest="max_size",
                   help="also cross-check against the brute-force search")
    p.add_argument("--sig", metavar="FILE")

    p = sub.add_parser("search", help="brute-force finite model search")
    p.add_argument("--formulas", required=True, metavar="SRC")
    p.add_argument("--max-size", type=int, default=3, dest="max_size")
    p.add_argument("--sig", metavar="FILE")

    p = sub.add_parser("ultraproduct", help="product of 2-models, quotient at an index")
    p.add_argument("--models", required=True, nargs="+", metavar="FILE")
    p.add_argument("--at", required=True, type=int, metavar="INDEX")
    p.add_argument("--check", required=True, metavar="SRC",
                   help="formulas to check (text, file, or - for stdin)")

    p = sub.add_parser("support", help="semantic support check via retraction")
    p.add_argument("formula", help="formula text, or - for stdin")
    p.add_argument("--vars", required=True, metavar="VARS", help="e.g. x,y")
    p.add_argument("--model", required=True, metavar="FILE")
    p.add_argument("--sig", metavar="FILE")

    return parser


def _read_source(value: str) -> str:
    """Resolve a formula source: '-' is stdin, an existing path is a file,
    anything else is literal text."""
    if value == "-":
        return sys.stdin.read()
    if os.path.exists(value):
        with open(value) as fh:
            return fh.read()
    return value


def _read_file(path: str | None) -> str | None:
    if path is None:
        return None
    with open(path) as fh:
        return fh.read()


class Client:
    def __init__(self, server: str | None):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server)
        else:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service.app import app

            self._client = TestClient(app)

    def post(self, path: str, payload: dict) -> tuple[int, dict]:
        response = self._client.post(path, json=payload)
        return response.status_code, response.json()


def _fail(body: dict) -> int:
    detail = body.get("detail", body)
    if isinstance(detail, dict) and "message" in detail:
        where = ""
        if detail.get("line") is not None:
            where = f" at line {detail['line']}, col {detail['col']}"
        print(f"error{where}: {detail['message']}", file=sys.stderr)
    else:
        print(f"error: {detail}", file=sys.stderr)
    return 3


def _emit(args, body: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(body, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    client = Client(args.server)

    if args.command == "parse":
        status, body = client.post("/parse", {
            "formula": _read_source(args.formula),
            "signature": _read_file(args.sig)})
        if status != 200:
            return _fail(body)
        _emit(args, body, [
            f"formula: {body['formula']}",
            "free: " + (", ".join(body["free_vars"]) or "(none)"),
        ])
        return 0

    if args.command == "subst":
        status, body = client.post("/subst", {
            "formula": _read_source(args.formula),
            "map": args.map,
            "signature": _read_file(args.sig)})
        if status != 200:
            return _fail(body)
        _emit(args, body, [f"result: {body['result']}"])
        return 0

    if args.command == "eval":
        status, body = client.post("/eval", {
            "formula": _read_source(args.formula),
            "model": _read_file(args.model),
            "valuation": args.val,
            "signature": _read_file(args.sig)})
        if status != 200:
            return _fail(body)
        atoms = ",".join(str(i) for i in body["value_atoms"])
        flag = " (top)" if body["is_top"] else ""
        _emit(args, body, [f"value: [{atoms}]{flag}"])
        return 0

    if args.command == "axioms":
        suites = None
        if args.suites and "all" not in args.suites:
            suites = args.suites
        status, body = client.post("/axioms", {
            "model": _read_file(args.model),
            "samples": args.samples,
            "seed": args.seed,
            "suites": suites})
        if status != 200:
            return _fail(body)
        lines = [
            f"{r['suite']}/{r['law']}: checked {r['checked']}, "
            f"violations {r['violation_count']}"
            for r in body["reports"]
        ]
        for r in body["reports"]:
            lines.extend(f"  counterexample: {v}" for v in r["violations"])
        lines.append(f"{body['violations']} violations")
        _emit(args, body, lines)
        return 0 if body["violations"] == 0 else 1

    if args.command == "henkin":
        status, body = client.post("/henkin", {
            "formulas": _read_source(args.formulas),
            "rounds": args.rounds,
            "depth": args.depth,
            "signature": _read_file(args.sig),
            "cross_check_size": args.max_size})
        if status != 200:
            return _fail(body)
        lines = [f"verdict: {body['verdict']}"]
        if body["reason"]:
            lines.append(f"reason: {body['reason']}")
        lines.append("witnesses: " + (", ".join(body["witnesses"]) or "(none)"))
        for theta in body["theta"]:
            lines.append(f"theta: {theta}")
        if body["verdict"] == "sat":
            lines.append(f"fragment perfect: {body['fragment_perfect']}")
            lines.append("model:")
            lines.extend("  " + l for l in body["model"].rstrip().splitlines())
            if body["identity_valuation"]:
                pairs = ", ".join(f"{k}:={v}"
                                  for k, v in body["identity_valuation"].items())
                lines.append(f"valuation: {pairs}")
        if body["cross_check"]:
            cc = body["cross_check"]
            found = f"model of size {cc['size']}" if cc["found"] else "no model"
            lines.append(
                f"cross-check (search up to {cc['max_size']}): {found}, "
                f"{'agrees' if cc['agrees'] else 'DISAGREES'}")
        _emit(args, body, lines)
        return {"sat": 0, "unsat": 1, "unknown": 2}[body["verdict"]]

    if args.command == "search":
        status, body = client.post("/search", {
            "formulas": _read_source(args.formulas),
            "max_size": args.max_size,
            "signature": _read_file(args.sig)})
        if status != 200:
            return _fail(body)
        if body["found"]:
            lines = ["model:"]
            lines.extend("  " + l for l in body["model"].rstrip().splitlines())
            if body["valuation"]:
                pairs = ", ".join(f"{k}:={v}" for k, v in body["valuation"].items())
                lines.append(f"valuation: {pairs}")
            _emit(args, body, lines)
            return 0
        _emit(args, body, [f"no model up to size {body['max_size']} (unknown)"])
        return 2

    if args.command == "ultraproduct":
        status, body = client.post("/ultraproduct", {
            "models": [_read_file(m) for m in args.models],
            "at_index": args.at,
            "formulas": _read_source(args.check)})
        if status != 200:
            return _fail(body)
        lines = []
        for r in body["results"]:
            mark = "ok " if r["los_ok"] and r["quotient_equals_factor"] else "FAIL"
            lines.append(f"{mark} {r['formula']}")
        lines.append("all checks passed" if body["ok"] else "some checks FAILED")
        _emit(args, body, lines)
        return 0 if body["ok"] else 1

    if args.command == "support":
        status, body = client.post("/support", {
            "formula": _read_source(args.formula),
            "vars": args.vars,
            "model": _read_file(args.model),
            "signature": _read_file(args.sig)})
        if status != 200:
            return _fail(body)
        _emit(args, body, [f"is_support: {str(body['is_support']).lower()}"])
        return 0 if body["is_support"] else 1

    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
