"""Command-line front end.

Exit codes: 0 success, 1 validation or usage error, 2 parse error (including
unreadable input), 3 scenario mismatch.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .inference import CLOSED_WORLD, OPEN_WORLD, ClassifyParams, UnknownBearing, classify, explain
from .kb import KBError, KnowledgeBase, build_kb
from .obo_io import (
    KBSyntaxError,
    OboSyntaxError,
    audit_obo,
    export_axiomatisation,
    parse_native,
    parse_obo,
    serialize_obo,
    write_report,
)
from .scenarios import builtin_scenarios, run_scenario

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_MISMATCH = 0, 1, 2, 3


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code
        self.message = message


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Exit(EXIT_INVALID, f"{self.prog}: error: {message}")


def _theta(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid decimal {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"theta {text} not in [0, 1]")
    return value


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise _Exit(EXIT_PARSE, f"cannot read {path}: {e}") from None


def _load_kb(path: str) -> KnowledgeBase:
    text = _read(path)
    try:
        doc = parse_native(text)
    except KBSyntaxError as e:
        raise _Exit(EXIT_PARSE, f"{path}: {e}") from None
    try:
        return build_kb(doc.records)
    except KBError as e:
        raise _Exit(EXIT_INVALID, f"{path}: {type(e).__name__}: {e}") from None


def _params(args) -> ClassifyParams:
    mode = OPEN_WORLD if args.mode == "open" else CLOSED_WORLD
    return ClassifyParams(theta=args.theta, mode=mode, assert_disjoint=args.assert_disjoint)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_classify(args) -> int:
    kb = _load_kb(args.kb)
    report = classify(kb, _params(args))
    _emit(write_report(report, args.format), args.out)
    for c in report.conflicts:
        print(f"conflict: {c}", file=sys.stderr)
    for v in report.violations:
        print(f"violation: {v}", file=sys.stderr)
    return EXIT_OK


def cmd_explain(args) -> int:
    kb = _load_kb(args.kb)
    try:
        trace = explain(kb, args.structure, args.realizable, _params(args))
    except UnknownBearing as e:
        raise _Exit(EXIT_INVALID, f"UnknownBearing: {e.args[0]}") from None
    _emit(trace.render() + "\n", args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    kb = _load_kb(args.kb)
    groups = [g for g in kb.homology_groups() if len(g) > 1]
    _emit(
        f"ok: {len(kb.species)} species, {len(kb.structures)} structures, "
        f"{len(kb.realizables)} realizables, {len(kb.processes)} processes, "
        f"{len(kb.bearings)} bearings, {len(groups)} non-trivial homology groups\n",
        args.out,
    )
    return EXIT_OK


def cmd_export_axioms(args) -> int:
    kb = _load_kb(args.kb)
    report = None if args.no_classify else classify(kb, _params(args))
    doc = export_axiomatisation(kb, report, assert_disjoint=args.assert_disjoint)
    _emit(serialize_obo(doc), args.out)
    return EXIT_OK


def cmd_scenario(args) -> int:
    scenarios = {s.name: s for s in builtin_scenarios()}
    if args.all:
        if args.name:
            raise _Exit(EXIT_INVALID, "give a scenario name or --all, not both")
        names = sorted(scenarios)
    elif args.name:
        if args.name not in scenarios:
            raise _Exit(EXIT_INVALID, f"unknown scenario {args.name!r}")
        names = [args.name]
    else:
        raise _Exit(EXIT_INVALID, "give a scenario name or --all")

    lines = ["scenario\tstructure\trealizable\texpected\tactual\tstatus"]
    failures = 0
    for name in names:
        for r in run_scenario(scenarios[name]):
            actual = r.actual.value if r.actual else "-"
            lines.append(f"{name}\t{r.structure}\t{r.realizable}\t{r.expected.value}\t{actual}\t"
                         f"{'pass' if r.passed else 'FAIL'}")
            failures += not r.passed
    lines.append(f"# {len(names)} scenario(s), {failures} failing expectation(s)")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_MISMATCH if failures else EXIT_OK


def cmd_audit_obo(args) -> int:
    text = _read(args.obo)
    try:
        doc = parse_obo(text)
    except OboSyntaxError as e:
        raise _Exit(EXIT_PARSE, f"{args.obo}: {e}") from None
    kb = _load_kb(args.kb)
    result = audit_obo(doc, kb, classify(kb, _params(args)))
    _emit(result.render(), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="funcrole", description="Classify realizable entities as functions or roles.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, kb=True, inference=True):
        if kb:
            p.add_argument("--kb", required=True, metavar="FILE", help="native knowledge base file")
        if inference:
            p.add_argument("--theta", type=_theta, default=0.5, help="prevalence threshold (default 0.5)")
            p.add_argument("--mode", choices=("closed", "open"), default="closed")
            p.add_argument("--assert-disjoint", action="store_true")
        p.add_argument("--out", metavar="FILE", help="write output here instead of stdout")

    p = sub.add_parser("classify", help="label every bearing")
    common(p)
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("explain", help="trace one bearing")
    common(p)
    p.add_argument("--structure", required=True, metavar="ID")
    p.add_argument("--realizable", required=True, metavar="ID")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("validate", help="parse and validate a knowledge base")
    common(p, inference=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("export-axioms", help="write the OBO axiomatisation")
    common(p)
    p.add_argument("--no-classify", action="store_true", help="emit only the upper scaffold placement")
    p.set_defaults(func=cmd_export_axioms)

    p = sub.add_parser("scenario", help="run built-in scenarios")
    common(p, kb=False, inference=False)
    p.add_argument("name", nargs="?")
    p.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("audit-obo", help="compare OBO role/function placement with inferred labels")
    common(p)
    p.add_argument("--obo", required=True, metavar="FILE")
    p.set_defaults(func=cmd_audit_obo)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except _Exit as e:
        if e.message:
            print(e.message, file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
