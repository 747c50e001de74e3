"""One solving interface over the internal solver and external ASP systems."""

from __future__ import annotations

import importlib.util
import os
import re
import shlex
import shutil
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .asp import AnswerSet, Program, ground, parse_asp, parse_atoms, stable_models
from .errors import (
    AspSyntaxError,
    GrounderRequired,
    OutputParseError,
    SolverCrashed,
    SolverNotFound,
    SolverTimeout,
    UnknownSolverType,
)

DEFAULT_TIMEOUT = 60.0
TIMEOUT_ENV = "LANA_SOLVER_TIMEOUT"
SOLVER_TYPES = ("internal", "clingo", "clasp", "DLV")

#: Per-dialect command-line and syntax details, kept in one place.
DIALECTS = {
    "internal": {"syntax": "gringo"},
    "clingo": {"command": "clingo", "cap_args": lambda cap: [str(cap or 0)], "syntax": "clingo"},
    "clasp": {"command": "clasp", "cap_args": lambda cap: [str(cap or 0)], "syntax": "clingo"},
    "DLV": {"command": "dlv", "cap_args": lambda cap: [f"-n={cap}"] if cap else [], "syntax": "gringo"},
}

Command = Union[str, Sequence[str], None]


def default_timeout() -> float:
    value = os.environ.get(TIMEOUT_ENV)
    if not value:
        return DEFAULT_TIMEOUT
    try:
        seconds = float(value)
    except ValueError:
        raise ValueError(f"{TIMEOUT_ENV} must be a number of seconds, got {value!r}") from None
    if seconds <= 0:
        raise ValueError(f"{TIMEOUT_ENV} must be positive, got {value!r}")
    return seconds


@dataclass
class SolverConfig:
    solver_type: str = "internal"
    solver_cmd: Command = None
    grounder_cmd: Command = None
    model_cap: Optional[int] = None
    timeout: float = field(default_factory=default_timeout)

    def __post_init__(self):
        if self.solver_type not in SOLVER_TYPES:
            match = {t.lower(): t for t in SOLVER_TYPES}.get(str(self.solver_type).lower())
            if match is None:
                raise UnknownSolverType(f"unknown solver type {self.solver_type!r}")
            self.solver_type = match
        if self.solver_type == "clasp" and not self.grounder_cmd:
            raise GrounderRequired("solver type clasp needs a grounder command")
        if self.model_cap is not None and self.model_cap < 1:
            raise ValueError("model_cap must be positive or None")


@dataclass(frozen=True)
class SolverResult:
    models: tuple
    exhausted: bool
    raw_output: str = ""
    elapsed: float = 0.0


def program_text(program: Program, solver_type: str = "internal") -> str:
    """Render a parsed program in the syntax the given backend reads.

    Current clingo and gringo releases separate choice-element conditions
    with commas instead of chaining colons.
    """
    return program.render(DIALECTS[solver_type]["syntax"]) + "\n"


# --- output parsing ----------------------------------------------------------------

_ANSWER = re.compile(r"Answer:\s*\d+")
_MODELS = re.compile(r"Models\s*:\s*(\d+)(\+?)")
_CLINGO_SKIP = re.compile(
    r"(clingo|clasp|pyclingo|gringo) version|Reading from|Solving\.\.\.|SATISFIABLE|UNSATISFIABLE|UNKNOWN"
    r"|OPTIMUM FOUND|Optimization|Models\s*:|Calls\s*:|Time\s*:|CPU Time\s*:|Threads\s*:|Choices|Conflicts"
    r"|Rules\s*:|Atoms\s*:|Bodies\s*:|Variables\s*:|Constraints\s*:|Backjumps|Restarts|Problems\s*:"
)


def _atoms(line: str, raw: str) -> AnswerSet:
    try:
        return AnswerSet(parse_atoms(line))
    except AspSyntaxError:
        raise OutputParseError(line, raw) from None


def parse_solver_output(text: str, dialect: str = "clingo") -> list[AnswerSet]:
    """Answer sets printed by a solver, in printed order."""
    if dialect in ("clingo", "clasp"):
        return _parse_clingo(text)
    if dialect == "DLV":
        return _parse_dlv(text)
    raise UnknownSolverType(f"no output parser for {dialect!r}")


def _parse_clingo(text: str) -> list[AnswerSet]:
    models = []
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        line = lines[i].strip()
        if _ANSWER.match(line):
            atom_line = lines[i + 1].strip() if i + 1 < len(lines) else ""
            models.append(_atoms(atom_line, text))
            i += 2
            continue
        if line and not _CLINGO_SKIP.match(line):
            raise OutputParseError(line, text)
        i += 1
    return models


def _parse_dlv(text: str) -> list[AnswerSet]:
    models = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("DLV ") or line.startswith("Best model") or line.startswith("Cost"):
            continue
        if not (line.startswith("{") and line.endswith("}")):
            raise OutputParseError(line, text)
        models.append(_atoms(line[1:-1], text))
    return models


def _clingo_exhausted(text: str, models: list, cap: Optional[int]) -> bool:
    m = None
    for m in _MODELS.finditer(text):
        pass
    if m is not None:
        return m.group(2) != "+"
    if "UNSATISFIABLE" in text:
        return True
    return cap is None or len(models) < cap


# --- backends ----------------------------------------------------------------------


def default_command(solver_type: str) -> list[str]:
    """Command used when a configuration names no solver executable.

    For clingo this falls back to the Python module's command-line entry
    point when no ``clingo`` binary is on the path.
    """
    name = DIALECTS[solver_type]["command"]
    if shutil.which(name) is None and solver_type == "clingo" and importlib.util.find_spec("clingo"):
        return [sys.executable, "-m", "clingo"]
    return [name]


def _command(cmd: Command, solver_type: str) -> list[str]:
    if cmd is None or cmd == "":
        return default_command(solver_type)
    if isinstance(cmd, str):
        return shlex.split(cmd)
    return list(cmd)


def _run(argv, stdin_text, timeout) -> subprocess.CompletedProcess:
    try:
        return subprocess.run(argv, input=stdin_text, capture_output=True, text=True, timeout=timeout)
    except FileNotFoundError:
        raise SolverNotFound(f"solver executable not found: {argv[0]}") from None
    except PermissionError:
        raise SolverNotFound(f"solver executable is not runnable: {argv[0]}") from None
    except subprocess.TimeoutExpired as exc:
        partial = exc.stdout or ""
        if isinstance(partial, bytes):
            partial = partial.decode(errors="replace")
        raise SolverTimeout(f"{argv[0]} did not finish within {timeout:g} s", partial) from None


# clingo-style exit codes: bits 1/2/4/8 flag interruption, 10/20/30 report results
_CLINGO_OK = {0, 10, 20, 30}


def _check(proc: subprocess.CompletedProcess, ok_codes, need_result: bool):
    out = proc.stdout or ""
    finished = re.search(r"^(SATISFIABLE|UNSATISFIABLE|OPTIMUM FOUND)\s*$", out, re.M)
    if proc.returncode not in ok_codes or (need_result and not finished):
        excerpt = (proc.stderr or "").strip()[-400:] or out.strip()[-400:]
        raise SolverCrashed(proc.returncode, excerpt, out + (proc.stderr or ""))


def _solve_internal(text: str, cfg: SolverConfig) -> tuple[list, bool, str]:
    models = stable_models(ground(parse_asp(text)))
    exhausted = cfg.model_cap is None or len(models) <= cfg.model_cap
    models = models[: cfg.model_cap] if cfg.model_cap else models
    raw = "".join(f"Answer: {i}\n{' '.join(map(str, m.sorted()))}\n" for i, m in enumerate(models, 1))
    raw += "SATISFIABLE\n" if models else "UNSATISFIABLE\n"
    return models, exhausted, raw


def _solve_clingo(text: str, cfg: SolverConfig) -> tuple[list, bool, str]:
    argv = _command(cfg.solver_cmd, "clingo") + DIALECTS["clingo"]["cap_args"](cfg.model_cap)
    proc = _run(argv, text, cfg.timeout)
    _check(proc, _CLINGO_OK, need_result=True)
    models = parse_solver_output(proc.stdout, "clingo")
    return models, _clingo_exhausted(proc.stdout, models, cfg.model_cap), proc.stdout


def _solve_clasp(text: str, cfg: SolverConfig) -> tuple[list, bool, str]:
    start = time.monotonic()
    grounder = _run(_command(cfg.grounder_cmd, "clasp"), text, cfg.timeout)
    if grounder.returncode != 0:
        excerpt = (grounder.stderr or "").strip()[-400:]
        raise SolverCrashed(grounder.returncode, excerpt, grounder.stdout + grounder.stderr)
    remaining = max(0.001, cfg.timeout - (time.monotonic() - start))
    argv = _command(cfg.solver_cmd, "clasp") + DIALECTS["clasp"]["cap_args"](cfg.model_cap)
    proc = _run(argv, grounder.stdout, remaining)
    _check(proc, _CLINGO_OK, need_result=True)
    models = parse_solver_output(proc.stdout, "clasp")
    return models, _clingo_exhausted(proc.stdout, models, cfg.model_cap), proc.stdout


def _solve_dlv(text: str, cfg: SolverConfig) -> tuple[list, bool, str]:
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "program.dl")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        argv = _command(cfg.solver_cmd, "DLV") + DIALECTS["DLV"]["cap_args"](cfg.model_cap) + [path]
        proc = _run(argv, None, cfg.timeout)
    _check(proc, {0}, need_result=False)
    models = parse_solver_output(proc.stdout, "DLV")
    exhausted = cfg.model_cap is None or len(models) < cfg.model_cap
    return models, exhausted, proc.stdout


_BACKENDS = {"internal": _solve_internal, "clingo": _solve_clingo, "clasp": _solve_clasp, "DLV": _solve_dlv}


def solve(program_text: str, cfg: Optional[SolverConfig] = None) -> SolverResult:
    """Compute the answer sets of ``program_text`` with the configured backend.

    Models come back deduplicated in canonical order, at most
    ``cfg.model_cap`` of them.
    """
    cfg = cfg or SolverConfig()
    start = time.perf_counter()
    models, exhausted, raw = _BACKENDS[cfg.solver_type](program_text, cfg)
    unique = sorted(set(models), key=AnswerSet.canonical_key)
    return SolverResult(tuple(unique), exhausted, raw, time.perf_counter() - start)
