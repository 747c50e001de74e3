"""Command-line entry points: ``lana <verb>`` plus ``aspdoc`` and ``aspunit`` aliases.

Flags follow the original single-dash spellings (``-o=path``, ``-HA``,
``-CE`` ...).  Paired flags such as ``-HA``/``-ha`` select one of two
settings; giving both is a usage error rather than "last one wins".
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .analysis import format_diagnostics, lint
from .annotations import read_program, read_testsuite
from .asp import parse_asp
from .aspdoc import DocOptions, generate_docs, write_site
from .aspunit import FAIL, INDETERMINATE, PASS, ReportOptions, check_block, render_report, run_suite
from .errors import LanaError
from .solvers import SOLVER_TYPES, SolverConfig

VERBS = ("aspdoc", "aspunit", "lint", "check")


class _Parser(argparse.ArgumentParser):
    """ArgumentParser with the single-dash help flags and exit code 2 on usage errors."""

    def __init__(self, prog: str, description: str):
        super().__init__(prog=prog, description=description, add_help=False, allow_abbrev=False)
        self.add_argument("-h", "-help", action="help", help="print usage information and exit")


def _pair(parser: _Parser, on: str, off: str, dest: str, on_help: str, off_help: str):
    parser.add_argument(on, dest=f"{dest}_on", action="store_true", help=on_help)
    parser.add_argument(off, dest=f"{dest}_off", action="store_true", help=off_help)


def _choose(parser: _Parser, args, dest: str, on: str, off: str, default: bool) -> bool:
    yes, no = getattr(args, f"{dest}_on"), getattr(args, f"{dest}_off")
    if yes and no:
        parser.error(f"{on} and {off} cannot be used together")
    if yes:
        return True
    if no:
        return False
    return default


def _fail(prog: str, message: str) -> int:
    print(f"{prog}: error: {message}", file=sys.stderr)
    return 2


# --- aspdoc ------------------------------------------------------------------------


def aspdoc_parser(prog: str = "aspdoc") -> _Parser:
    p = _Parser(prog, "Generate HTML documentation for annotated answer-set programs.")
    p.add_argument("-o", dest="output", metavar="path", default=".", help="set output directory to path (-o=path)")
    _pair(p, "-HA", "-ha", "hidden", "show hidden atoms (default)", "do not show hidden atoms")
    _pair(p, "-S", "-s", "source", "include ASP code in the documentation (default)", "do not include ASP code")
    _pair(p, "-A", "-a", "lana", "include annotations in the code view (default)", "do not include annotations")
    p.add_argument("-potassco", "-p", dest="gringo", action="store_true", help="input language is gringo (default)")
    p.add_argument("-dlv", "-d", dest="dlv", action="store_true", help="input language is DLV")
    p.add_argument("files", nargs="*", metavar="file", help="program files")
    return p


def aspdoc_main(argv: Optional[Sequence[str]] = None, prog: str = "aspdoc") -> int:
    parser = aspdoc_parser(prog)
    args = parser.parse_args(argv)
    hidden = _choose(parser, args, "hidden", "-HA", "-ha", True)
    source = _choose(parser, args, "source", "-S", "-s", True)
    lana = _choose(parser, args, "lana", "-A", "-a", True)
    if args.gringo and args.dlv:
        parser.error("-potassco and -dlv cannot be used together")
    if not args.files:
        parser.error("no program files given")
    opts = DocOptions(Path(args.output), hidden, source, lana, "dlv" if args.dlv else "gringo")
    try:
        ap, diags = read_program(args.files)
        diags = diags + lint(ap)
        if diags:
            sys.stderr.write(format_diagnostics(diags))
        write_site(generate_docs(ap, opts), opts.output_dir)
    except LanaError as exc:
        return _fail(prog, str(exc))
    except OSError as exc:
        return _fail(prog, f"{exc.filename}: {exc.strerror or exc}")
    return 0


# --- aspunit -----------------------------------------------------------------------


def aspunit_parser(prog: str = "aspunit") -> _Parser:
    p = _Parser(prog, "Run the unit tests of an answer-set program as configured in a test-suite file.")
    _pair(p, "-CE", "-ce", "ce", "show counterexample if a test case fails", "do not show counterexamples (default)")
    _pair(p, "-D", "-d", "desc", "show description of a test case if it fails", "do not show descriptions (default)")
    p.add_argument("suite", nargs="*", help="test-suite file")
    return p


def aspunit_main(argv: Optional[Sequence[str]] = None, prog: str = "aspunit") -> int:
    parser = aspunit_parser(prog)
    args = parser.parse_args(argv)
    options = ReportOptions(
        show_counterexample=_choose(parser, args, "ce", "-CE", "-ce", False),
        show_description=_choose(parser, args, "desc", "-D", "-d", False),
    )
    if len(args.suite) != 1:
        parser.error("expected exactly one test-suite file")
    try:
        suite = read_testsuite(args.suite[0])
    except LanaError as exc:
        return _fail(prog, str(exc))
    except OSError as exc:
        return _fail(prog, f"{exc.filename}: {exc.strerror or exc}")
    report, code = run_suite(suite, options)
    if report.error_message:
        print(f"{prog}: error: {report.error_message}", file=sys.stderr)
    sys.stdout.write(render_report(report, options))
    return code


# --- lint --------------------------------------------------------------------------


def lint_main(argv: Optional[Sequence[str]] = None, prog: str = "lana lint") -> int:
    parser = _Parser(prog, "Check signatures and term types of annotated programs.")
    parser.add_argument("files", nargs="+", metavar="file", help="program files")
    args = parser.parse_args(argv)
    try:
        ap, diags = read_program(args.files)
    except LanaError as exc:
        return _fail(prog, str(exc))
    except OSError as exc:
        return _fail(prog, f"{exc.filename}: {exc.strerror or exc}")
    diags = sorted(diags + lint(ap), key=lambda d: d.sort_key())
    sys.stdout.write(format_diagnostics(diags))
    return 1 if any(d.severity == "error" for d in diags) else 0


# --- check -------------------------------------------------------------------------


def check_main(argv: Optional[Sequence[str]] = None, prog: str = "lana check") -> int:
    parser = _Parser(prog, "Check the pre- and postconditions and assertions of one block against an input.")
    parser.add_argument("--input", required=True, metavar="facts", help="file with the input facts")
    parser.add_argument("--block", required=True, metavar="name", help="block whose conditions are checked")
    parser.add_argument("--solver", default="internal", choices=SOLVER_TYPES, help="solver backend")
    parser.add_argument("--solver-cmd", default=None, help="solver command line")
    parser.add_argument("--grounder-cmd", default=None, help="grounder command line (clasp only)")
    parser.add_argument("files", nargs="+", metavar="file", help="program files")
    args = parser.parse_args(argv)
    try:
        cfg = SolverConfig(args.solver, args.solver_cmd, args.grounder_cmd)
        ap, _ = read_program(args.files)
        facts = parse_asp(Path(args.input).read_text(encoding="utf-8"), args.input)
        results = check_block(ap, args.block, facts, cfg)
    except LanaError as exc:
        return _fail(prog, str(exc))
    except OSError as exc:
        return _fail(prog, f"{exc.filename}: {exc.strerror or exc}")
    labels = {PASS: "holds", FAIL: "violated", INDETERMINATE: "undecided"}
    for cond, res in results:
        print(f"{cond.keyword} {cond.name}: {labels[res.verdict]}")
        for check in res.failed_checks:
            print(f"  {check.description}")
            if check.counterexample is not None:
                print("    Answer set: " + " ".join(a.render(", ") + "." for a in check.counterexample.sorted()))
        for warning in res.warnings:
            print(f"  note: {warning}")
    verdicts = {res.verdict for _, res in results}
    return 0 if verdicts <= {PASS} else 1


# --- dispatch ----------------------------------------------------------------------

USAGE = """usage: lana <verb> [options] ...

verbs:
  aspdoc    generate HTML documentation
  aspunit   run a test suite
  lint      check signatures and term types
  check     check a block's conditions against an input

Run "lana <verb> -h" for the options of a verb.
"""


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "-help", "--help"):
        stream = sys.stdout if argv else sys.stderr
        stream.write(USAGE)
        return 0 if argv else 2
    verb, rest = argv[0], argv[1:]
    handlers = {"aspdoc": aspdoc_main, "aspunit": aspunit_main, "lint": lint_main, "check": check_main}
    if verb not in handlers:
        sys.stderr.write(f"lana: error: unknown verb {verb!r}\n{USAGE}")
        return 2
    try:
        return handlers[verb](rest, prog=f"lana {verb}")
    except SystemExit as exc:  # argparse exits on -h and on usage errors
        return exc.code if isinstance(exc.code, int) else 2


def _run(handler) -> None:
    try:
        code = handler(sys.argv[1:])
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
    sys.exit(code)


def aspdoc_entry() -> None:
    _run(aspdoc_main)


def aspunit_entry() -> None:
    _run(aspunit_main)


def lana_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    lana_entry()
