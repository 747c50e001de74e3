"""Running LANA unit tests, preconditions, postconditions and assertions."""

from __future__ import annotations

import textwrap
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .annotations import SuiteConfig, parse_source, read_program
from .asp import AnswerSet, Atom, Program, count_models_where
from .errors import LanaError, UnknownBlock
from .model import (
    AnnotatedProgram,
    Condition,
    HasAnswerSet,
    NoAnswerSet,
    TestAtoms,
    TestCase,
    find_block,
    scope_rules,
)
from .solvers import SolverConfig, SolverResult, program_text, solve

PASS = "pass"
FAIL = "fail"
INDETERMINATE = "indeterminate"
ERROR = "error"

OUTCOME_LABELS = {PASS: "Successful", FAIL: "Failed", INDETERMINATE: "Indeterminate", ERROR: "Error"}
VACUOUS = "no answer sets; condition vacuously satisfied"


@dataclass(frozen=True)
class FailedCheck:
    description: str  # e.g. "@falseinall forbiddenShip"
    counterexample: Optional[AnswerSet] = None
    observed: Optional[int] = None
    required: Optional[int] = None


@dataclass
class ConditionResult:
    verdict: str
    failed_checks: list = field(default_factory=list)
    undecided_checks: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS


@dataclass
class TestResult:
    name: str
    description: str
    outcome: str
    condition_results: list = field(default_factory=list)
    error_message: Optional[str] = None
    elapsed: float = 0.0

    __test__ = False


@dataclass
class TestReport:
    suite_name: str
    results: list = field(default_factory=list)
    error_message: Optional[str] = None

    __test__ = False

    @property
    def summary(self) -> dict:
        counts = {PASS: 0, FAIL: 0, INDETERMINATE: 0, ERROR: 0}
        for r in self.results:
            counts[r.outcome] += 1
        return counts

    @property
    def exit_code(self) -> int:
        counts = self.summary
        if self.error_message is not None or counts[ERROR]:
            return 2
        if counts[FAIL] or counts[INDETERMINATE]:
            return 1
        return 0


@dataclass(frozen=True)
class ReportOptions:
    show_counterexample: bool = False
    show_description: bool = False


def _combine(verdicts) -> str:
    verdicts = list(verdicts)
    if FAIL in verdicts:
        return FAIL
    if INDETERMINATE in verdicts:
        return INDETERMINATE
    return PASS


# --- test conditions -----------------------------------------------------------------


def _first_model(models, atom: Atom, value: bool) -> Optional[AnswerSet]:
    return next((m for m in models if (atom in m) == value), None)


def _check_atom(atom: Atom, mode, models, exhausted: bool) -> tuple[str, Optional[FailedCheck]]:
    polarity = mode.polarity
    count = count_models_where(models, atom, polarity)
    check = f"{mode} {atom}"
    if mode.quantifier == "all":
        if count < len(models):
            return FAIL, FailedCheck(check, _first_model(models, atom, not polarity))
        return (PASS if exhausted else INDETERMINATE), None
    if mode.quantifier == "atleast":
        if count >= mode.n:
            return PASS, None
        if exhausted:
            return FAIL, FailedCheck(check, observed=count, required=mode.n)
        return INDETERMINATE, None
    # atmost
    if count > mode.n:
        witnesses = [m for m in models if (atom in m) == polarity]
        return FAIL, FailedCheck(check, witnesses[mode.n], observed=count, required=mode.n)
    return (PASS if exhausted else INDETERMINATE), None


def evaluate_condition(cond, result: SolverResult) -> ConditionResult:
    """Verdict of one test condition over the answer sets in ``result``."""
    models = list(result.models)
    if isinstance(cond, HasAnswerSet):
        if models:
            return ConditionResult(PASS)
        if result.exhausted:
            return ConditionResult(FAIL, [FailedCheck(str(cond), observed=0, required=1)])
        return ConditionResult(INDETERMINATE, undecided_checks=[str(cond)])
    if isinstance(cond, NoAnswerSet):
        if models:
            return ConditionResult(FAIL, [FailedCheck(str(cond), models[0], observed=len(models), required=0)])
        if result.exhausted:
            return ConditionResult(PASS)
        return ConditionResult(INDETERMINATE, undecided_checks=[str(cond)])
    if isinstance(cond, TestAtoms):
        failed, undecided, verdicts = [], [], []
        for atom in cond.atoms:
            verdict, check = _check_atom(atom, cond.mode, models, result.exhausted)
            verdicts.append(verdict)
            if check is not None:
                failed.append(check)
            elif verdict == INDETERMINATE:
                undecided.append(f"{cond.mode} {atom}")
        return ConditionResult(_combine(verdicts), failed, undecided)
    raise TypeError(f"not a test condition: {cond!r}")


def _test_name(tc: TestCase, fallback: str) -> str:
    return tc.name or fallback


# --- targeted queries for external solvers ---------------------------------------------
#
# External backends may face programs with astronomically many answer sets
# (the full Battleship guess, say).  Instead of enumerating them all, each
# check adds one constraint that keeps only the models relevant to it and asks
# for just as many models as the check needs.  Adding a constraint removes
# exactly the stable models violating it, so verdicts and counts are unchanged.


def _solve_capped(program: Program, extra: str, cap: int, cfg: SolverConfig) -> SolverResult:
    cap = cap if cfg.model_cap is None else min(cap, cfg.model_cap)
    return solve(program_text(program, cfg.solver_type) + extra, replace(cfg, model_cap=cap))


def _models_where(program: Program, atom: Atom, value: bool, cap: int, cfg: SolverConfig) -> SolverResult:
    """Up to ``cap`` answer sets in which ``atom`` has truth value ``value``."""
    constraint = f":- not {atom}.\n" if value else f":- {atom}.\n"
    return _solve_capped(program, constraint, cap, cfg)


def _query_atom(program: Program, atom: Atom, mode, cfg: SolverConfig) -> tuple[str, Optional[FailedCheck]]:
    check = f"{mode} {atom}"
    if mode.quantifier == "all":
        res = _models_where(program, atom, not mode.polarity, 1, cfg)
        if res.models:
            return FAIL, FailedCheck(check, res.models[0])
        return (PASS if res.exhausted else INDETERMINATE), None
    if mode.quantifier == "atleast":
        if mode.n == 0:
            return PASS, None
        res = _models_where(program, atom, mode.polarity, mode.n, cfg)
        count = len(res.models)
        if count >= mode.n:
            return PASS, None
        if res.exhausted:
            return FAIL, FailedCheck(check, observed=count, required=mode.n)
        return INDETERMINATE, None
    res = _models_where(program, atom, mode.polarity, mode.n + 1, cfg)
    if len(res.models) > mode.n:
        return FAIL, FailedCheck(check, res.models[mode.n], observed=len(res.models), required=mode.n)
    return (PASS if res.exhausted else INDETERMINATE), None


def query_condition(cond, program: Program, cfg: SolverConfig) -> ConditionResult:
    """Decide a test condition with targeted solver calls instead of full enumeration."""
    if isinstance(cond, (HasAnswerSet, NoAnswerSet)):
        return evaluate_condition(cond, _solve_capped(program, "", 1, cfg))
    if isinstance(cond, TestAtoms):
        failed, undecided, verdicts = [], [], []
        for atom in cond.atoms:
            verdict, check = _query_atom(program, atom, cond.mode, cfg)
            verdicts.append(verdict)
            if check is not None:
                failed.append(check)
            elif verdict == INDETERMINATE:
                undecided.append(f"{cond.mode} {atom}")
        return ConditionResult(_combine(verdicts), failed, undecided)
    raise TypeError(f"not a test condition: {cond!r}")


def run_testcase(tc: TestCase, ap: AnnotatedProgram, cfg: Optional[SolverConfig] = None, name: str = "") -> TestResult:
    """Solve the scoped blocks joined with the test's rules and judge every condition.

    The internal solver enumerates all answer sets once (up to the model
    cap); external solvers answer one targeted query per checked atom.
    """
    cfg = cfg or SolverConfig()
    label = _test_name(tc, name or "testcase")
    start = time.perf_counter()
    try:
        program = scope_rules(ap, tc.scope) + tc.rules
        if cfg.solver_type == "internal":
            result = solve(program_text(program, cfg.solver_type), cfg)
            results = [evaluate_condition(c, result) for c in tc.conditions]
        else:
            results = [query_condition(c, program, cfg) for c in tc.conditions]
    except LanaError as exc:
        return TestResult(label, tc.description, ERROR, error_message=exc.message, elapsed=time.perf_counter() - start)
    outcome = _combine(r.verdict for r in results)
    return TestResult(label, tc.description, outcome, results, elapsed=time.perf_counter() - start)


# --- contracts -----------------------------------------------------------------------


def _entailment(cond: Condition, result: SolverResult) -> ConditionResult:
    models = list(result.models)
    if not models:
        if result.exhausted:
            return ConditionResult(PASS, warnings=[VACUOUS])
        return ConditionResult(INDETERMINATE, undecided_checks=[f"@{cond.mode}"])
    wanted = cond.mode == "always"
    failed, verdicts = [], []
    for atom in cond.test_atoms:
        witness = _first_model(models, atom, not wanted)
        if witness is not None:
            failed.append(FailedCheck(f"@{cond.mode} {atom}", witness))
            verdicts.append(FAIL)
        else:
            verdicts.append(PASS if result.exhausted else INDETERMINATE)
    undecided = [f"@{cond.mode} {a}" for a, v in zip(cond.test_atoms, verdicts) if v == INDETERMINATE]
    return ConditionResult(_combine(verdicts), failed, undecided)


def _query_entailment(cond: Condition, program: Program, cfg: SolverConfig) -> ConditionResult:
    any_model = _solve_capped(program, "", 1, cfg)
    if not any_model.models:
        return _entailment(cond, any_model)  # vacuous or undecided
    wanted = cond.mode == "always"
    failed, verdicts = [], []
    for atom in cond.test_atoms:
        res = _models_where(program, atom, not wanted, 1, cfg)
        if res.models:
            failed.append(FailedCheck(f"@{cond.mode} {atom}", res.models[0]))
            verdicts.append(FAIL)
        else:
            verdicts.append(PASS if res.exhausted else INDETERMINATE)
    undecided = [f"@{cond.mode} {a}" for a, v in zip(cond.test_atoms, verdicts) if v == INDETERMINATE]
    return ConditionResult(_combine(verdicts), failed, undecided)


def _decide(cond: Condition, program: Program, cfg: Optional[SolverConfig]) -> ConditionResult:
    cfg = cfg or SolverConfig()
    if cfg.solver_type == "internal":
        return _entailment(cond, solve(program_text(program, cfg.solver_type), cfg))
    return _query_entailment(cond, program, cfg)


def check_precondition(cond: Condition, input_facts: Program, cfg: Optional[SolverConfig] = None) -> ConditionResult:
    """Does the input, joined with the condition's rules, cautiously satisfy it?"""
    return _decide(cond, input_facts + cond.rules, cfg)


def check_postcondition(
    cond: Condition, block_rules: Program, input_facts: Program, cfg: Optional[SolverConfig] = None
) -> ConditionResult:
    """Does the block joined with the input and the condition's rules cautiously satisfy it?"""
    return _decide(cond, block_rules + input_facts + cond.rules, cfg)


def check_block(
    ap: AnnotatedProgram, block_name: str, input_facts: Program, cfg: Optional[SolverConfig] = None
) -> list[tuple[Condition, ConditionResult]]:
    """Check every condition of one block against one input.

    Assertions are checked against the whole program, the other
    conditions against the block and its descendants.
    """
    block = find_block(ap, block_name)
    if block is None:
        raise UnknownBlock(block_name)
    rules = scope_rules(ap, [block.name])
    everything = scope_rules(ap, [ap.root.name])
    out = []
    for cond in block.conditions:
        if cond.kind == "precondition":
            res = check_precondition(cond, input_facts, cfg)
        elif cond.kind == "postcondition":
            res = check_postcondition(cond, rules, input_facts, cfg)
        else:
            res = check_postcondition(cond, everything, input_facts, cfg)
        out.append((cond, res))
    return out


# --- suites ------------------------------------------------------------------------


def suite_solver_config(suite: SuiteConfig, model_cap: Optional[int] = None) -> SolverConfig:
    return SolverConfig(suite.solver_type, suite.solver_cmd, suite.grounder_cmd, model_cap)


def run_suite(
    suite: SuiteConfig, options: Optional[ReportOptions] = None, cfg: Optional[SolverConfig] = None
) -> tuple[TestReport, int]:
    """Run every test file of ``suite`` against its program.

    Unreadable or unparsable files abort the run: the report then carries
    only an error message and the exit code is 2.
    """
    report = TestReport(suite.name)
    try:
        cfg = cfg or suite_solver_config(suite)
        ap, _ = read_program(suite.program_paths())
        tests = []
        for path in suite.test_paths():
            test_ap, _ = parse_source(Path(path).read_text(encoding="utf-8"), str(path))
            tests.append((path, test_ap.test_cases))
    except OSError as exc:
        report.error_message = f"{exc.filename}: {exc.strerror or exc}"
        return report, report.exit_code
    except LanaError as exc:
        report.error_message = str(exc)
        return report, report.exit_code
    for path, cases in tests:
        if not cases:
            report.results.append(TestResult(Path(path).name, "", ERROR, error_message=f"{path}: no @testcase found"))
        for tc in cases:
            report.results.append(run_testcase(tc, ap, cfg, Path(path).name))
    return report, report.exit_code


# --- report ------------------------------------------------------------------------

WRAP = 36


def _answer_set_lines(model: AnswerSet) -> list[str]:
    lines, current = [], ""
    for atom in model.sorted():
        piece = atom.render(", ") + "."
        if current and len(current) + len(piece) > WRAP:
            lines.append(current)
            current = ""
        current += piece
    if current or not lines:
        lines.append(current)
    return lines


def _check_lines(check: FailedCheck, options: ReportOptions) -> list[str]:
    lines = [f"  Failed Test : {check.description}"]
    if check.observed is not None and check.required is not None:
        lines.append(f"    Answer sets counted : {check.observed} (required {check.required})")
    if options.show_counterexample and check.counterexample is not None:
        lines.append("    Counterexample:")
        lines.append("      Answer set:")
        lines.extend("        " + line for line in _answer_set_lines(check.counterexample))
    return lines


def render_report(report: TestReport, options: Optional[ReportOptions] = None) -> str:
    """The plain-text report printed by the test runner."""
    options = options or ReportOptions()
    stanzas = [[f"Test Suite {report.suite_name}"]]
    if report.error_message:
        stanzas.append([f"Error : {report.error_message}"])
    width = max((len(r.name) for r in report.results), default=0)
    for r in report.results:
        lines = [f"Test Case {r.name:<{width}}: {OUTCOME_LABELS[r.outcome]}"]
        if r.outcome != PASS and options.show_description and r.description:
            lines.extend(textwrap.indent(r.description, "    ").splitlines())
        details = []
        if r.outcome == ERROR:
            details.append(f"  Error : {r.error_message}")
        for cr in r.condition_results:
            for check in cr.failed_checks:
                details.extend(_check_lines(check, options))
            for text in cr.undecided_checks:
                details.append(f"  Undecided Test : {text} (answer set enumeration was incomplete)")
        if details:
            if len(lines) > 1:
                lines.append("")
            lines.extend(details)
        stanzas.append(lines)
    return "\n\n".join("\n".join(s) for s in stanzas) + "\n"
