"""Exception hierarchy shared by every layer of the toolchain."""

from __future__ import annotations


class LanaError(Exception):
    """Base class; ``code`` is the short identifier used in diagnostics."""

    code = "Error"

    def __init__(self, message: str, location=None):
        self.message = message
        self.location = location
        super().__init__(message if location is None else f"{location}: {message}")


# asp-core


class AspSyntaxError(LanaError):
    code = "SyntaxError"


class SafetyError(LanaError):
    code = "SafetyError"

    def __init__(self, variable: str, location=None):
        self.variable = variable
        super().__init__(f"unsafe variable {variable}", location)


class ArithmeticTypeError(LanaError):
    code = "ArithmeticTypeError"


class SearchLimitExceeded(LanaError):
    code = "SearchLimitExceeded"


class EmptyModelList(LanaError):
    code = "EmptyModelList"


# annotation parsing


class UnterminatedAnnotation(LanaError):
    code = "UnterminatedAnnotation"


class MalformedAnnotation(LanaError):
    code = "MalformedAnnotation"


class OverlappingBlocks(LanaError):
    code = "OverlappingBlocks"


class DuplicateBlockName(LanaError):
    code = "DuplicateBlockName"


class MalformedSignatureList(LanaError):
    code = "MalformedSignatureList"


class NonGroundTestAtom(LanaError):
    code = "NonGroundTestAtom"


class MissingField(LanaError):
    code = "MissingField"


class UnknownSolverType(LanaError):
    code = "UnknownSolverType"


class GrounderRequired(LanaError):
    code = "GrounderRequired"


# model and analysis


class UnknownBlock(LanaError):
    code = "UnknownBlock"

    def __init__(self, name: str, location=None):
        self.name = name
        super().__init__(f"unknown block {name!r}", location)


class UnknownTerm(LanaError):
    code = "UnknownTerm"


class CircularSameRangeAs(LanaError):
    code = "CircularSameRangeAs"

    def __init__(self, cycle, location=None):
        self.cycle = tuple(cycle)
        super().__init__(f"circular @samerangeas: {' -> '.join(self.cycle)}", location)


class TypeEvaluationError(LanaError):
    code = "TypeEvaluationError"


# solver adapter


class SolverError(LanaError):
    """Raised for failed external runs; ``raw_output`` keeps whatever was captured."""

    code = "SolverError"

    def __init__(self, message: str, raw_output: str = ""):
        self.raw_output = raw_output
        super().__init__(message)


class SolverNotFound(SolverError):
    code = "SolverNotFound"


class SolverCrashed(SolverError):
    code = "SolverCrashed"

    def __init__(self, exit_code: int, stderr_excerpt: str, raw_output: str = ""):
        self.exit_code = exit_code
        self.stderr_excerpt = stderr_excerpt
        super().__init__(f"solver exited with code {exit_code}: {stderr_excerpt}", raw_output)


class SolverTimeout(SolverError):
    code = "Timeout"


class OutputParseError(SolverError):
    code = "OutputParseError"

    def __init__(self, line: str, raw_output: str = ""):
        self.line = line
        super().__init__(f"cannot parse solver output line: {line!r}", raw_output)
