"""Walk through the toolchain on the Battleship example.

    python demos/battleship_walkthrough.py [output-dir]

Parses the annotated program, lints it, checks a precondition against two
inputs, runs the unit tests on the one-row grid and writes the HTML
documentation (to a temporary directory unless one is given).
"""

import sys
import tempfile
from pathlib import Path

from lana.analysis import format_diagnostics, lint
from lana.annotations import parse_source, read_testsuite
from lana.asp import parse_asp
from lana.aspdoc import generate_docs, write_site
from lana.aspunit import ReportOptions, check_precondition, render_report, run_suite
from lana.model import find_block

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def show_blocks(block, depth=0):
    print("  " * depth + f"- {block.name}: {len(block.rules)} rules")
    for child in block.children:
        show_blocks(child, depth + 1)


def main(out_dir=None):
    text = (FIXTURES / "battleship.lp").read_text()
    ap, diags = parse_source(text, "battleship.lp")

    print("Block structure")
    show_blocks(ap.root)

    battleship = find_block(ap, "Battleship")
    print("\nInput :", ", ".join(map(str, battleship.input_sig)))
    print("Output:", ", ".join(map(str, battleship.output_sig)))

    print("\nLint of the clean program:", format_diagnostics(diags + lint(ap)) or "no diagnostics")
    broken, _ = parse_source(text + "water(1,1,1).\nrowHint(11,3).\n", "battleship.lp")
    print("Lint after adding two bad facts:")
    print(format_diagnostics(lint(broken)), end="")

    excl = next(c for c in battleship.conditions if c.name == "Excl")
    for facts in ("water(1,1). ship(1,1).", "water(1,1)."):
        res = check_precondition(excl, parse_asp(facts))
        print(f"\nPrecondition Excl on {{{facts}}}: {res.verdict}")

    print("\nUnit tests on the one-row grid\n")
    report, code = run_suite(read_testsuite(FIXTURES / "suite_small.txt"))
    print(render_report(report, ReportOptions(show_counterexample=True, show_description=True)))
    print(f"exit code {code}")

    target = Path(out_dir) if out_dir else Path(tempfile.mkdtemp(prefix="battleship-doc-"))
    written = write_site(generate_docs(ap), target)
    print(f"\nWrote {len(written)} documentation pages to {target}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else None)
