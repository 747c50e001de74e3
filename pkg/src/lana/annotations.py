"""Reading annotated ASP sources into an :class:`AnnotatedProgram`.

Annotations live in comment environments opened with ``%**`` and closed
with ``*%``; to an ASP solver they are ordinary block comments.  Inside an
environment every keyword starts with ``@``; free text following a
keyword's arguments is the description of the element it introduced.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from .asp.parser import (
    SourceMap,
    parse_asp,
    parse_atom_list_prefix,
    parse_body_prefix,
    parse_term_list_prefix,
)
from .asp.syntax import Interval, Location, Number, Program, is_ground_term
from .errors import (
    AspSyntaxError,
    DuplicateBlockName,
    GrounderRequired,
    LanaError,
    MalformedAnnotation,
    MalformedSignatureList,
    MissingField,
    NonGroundTestAtom,
    OverlappingBlocks,
    UnknownSolverType,
    UnterminatedAnnotation,
)
from .model import (
    PROGRAM_ROOT,
    AnnotatedProgram,
    AtomDecl,
    Block,
    Condition,
    Diagnostic,
    FromList,
    HasAnswerSet,
    Mode,
    NoAnswerSet,
    SameRangeAs,
    Signature,
    TermDecl,
    TestAtoms,
    TestCase,
    WithBody,
)

OPEN = "%**"
CLOSE = "*%"


@dataclass(frozen=True)
class AnnotationText:
    content: str
    start: Optional[Location] = field(default=None, compare=False)
    end: Optional[Location] = field(default=None, compare=False)


@dataclass(frozen=True)
class RuleText:
    content: str
    start: Optional[Location] = field(default=None, compare=False)
    end: Optional[Location] = field(default=None, compare=False)


Segment = Union[AnnotationText, RuleText]


# --- segmentation ------------------------------------------------------------------


def extract_annotations(source: str, file: str = "<string>") -> list[Segment]:
    """Split ``source`` into annotation and rule segments.

    Ordinary comments are dropped; inside rule text they are blanked out
    so that rule positions stay exact.
    """
    smap = SourceMap(source, file)
    segments: list[Segment] = []
    code: list[str] = []
    code_start = 0
    i = 0
    n = len(source)

    def flush(upto: int):
        text = "".join(code)
        stripped = text.strip()
        if stripped:
            lead = len(text) - len(text.lstrip())
            trail = len(text.rstrip())
            segments.append(
                RuleText(
                    stripped,
                    smap.location(code_start + lead),
                    smap.location(code_start + trail),
                )
            )
        code.clear()

    while i < n:
        ch = source[i]
        if ch == '"':
            j = i + 1
            while j < n and source[j] not in '"\n':
                j += 2 if source[j] == "\\" else 1
            code.append(source[i : j + 1])
            i = j + 1
        elif source.startswith(OPEN, i) and not source.startswith("%**%", i):
            flush(i)
            j = source.find(CLOSE, i + len(OPEN))
            if j < 0:
                raise UnterminatedAnnotation("annotation is never closed with '*%'", smap.location(i))
            raw = source[i + len(OPEN) : j]
            lead = len(raw) - len(raw.lstrip())
            segments.append(
                AnnotationText(
                    raw.strip(),
                    smap.location(i + len(OPEN) + lead),
                    smap.location(j + len(CLOSE)),
                )
            )
            i = j + len(CLOSE)
            code_start = i
        elif source.startswith("%*", i):
            j = source.find(CLOSE, i + 2)
            if j < 0:
                raise AspSyntaxError("unterminated block comment", smap.location(i))
            code.append(_blank(source[i : j + 2]))
            i = j + 2
        elif ch == "%":
            j = source.find("\n", i)
            j = n if j < 0 else j
            code.append(" " * (j - i))
            i = j
        else:
            if not code:
                code_start = i
            code.append(ch)
            i += 1
    flush(n)
    return segments


def _blank(text: str) -> str:
    return re.sub(r"[^\n]", " ", text)


def render_segments(segments: list[Segment]) -> str:
    """Source text that segments back into ``segments``."""
    parts = []
    for seg in segments:
        if isinstance(seg, AnnotationText):
            parts.append(f"{OPEN} {seg.content} {CLOSE}")
        else:
            parts.append(seg.content)
    return "\n".join(parts) + "\n"


# --- annotation parsing ------------------------------------------------------------

_KEYWORD = re.compile(r"(?<![\w.@])@([A-Za-z]+)")
_NAME = re.compile(r"[ \t]*([A-Za-z_][\w']*)")
_NAME_LIST = re.compile(r"\s*([A-Za-z_#][\w']*)((?:\s*,\s*[A-Za-z_#][\w']*)*)")
_SIG_ENTRY = re.compile(r"\s*([a-z][\w']*)\s*/\s*(\d+)")

KNOWN_KEYWORDS = {
    "block", "atom", "term", "from", "with", "samerangeas",
    "input", "requires", "output", "defines",
    "assert", "precon", "postcon", "always", "never",
    "testcase", "scope", "testatoms", "testhasanswerset", "testnoanswerset",
    *Mode.NAMES,
}  # fmt: skip


def _clean_description(parts: list[str]) -> str:
    lines = [line.strip() for part in parts for line in part.splitlines()]
    while lines and not lines[0]:
        lines.pop(0)
    while lines and not lines[-1]:
        lines.pop()
    return "\n".join(lines)


@dataclass
class _Described:
    """Accumulates description text for the element most recently opened."""

    element: object
    parts: list = field(default_factory=list)

    def flush(self):
        text = _clean_description(self.parts)
        if text:
            old = getattr(self.element, "description", "")
            self.element.description = f"{old}\n{text}" if old else text
        self.parts.clear()


class _Builder:
    def __init__(self, file: str, root: Block):
        self.file = file
        self.root = root
        self.stack: list[Block] = [root]
        self.names: dict = {}
        self.test_cases: list[TestCase] = []
        self.diagnostics: list[Diagnostic] = []
        self.capture: Optional[TestCase] = None

    @property
    def block(self) -> Block:
        return self.stack[-1]

    def warn(self, code, message, location, severity="warning"):
        self.diagnostics.append(Diagnostic(severity, code, message, location))

    # segments

    def add_rules(self, seg: RuleText):
        loc = seg.start
        program = parse_asp(seg.content, loc.file, loc.line, loc.column)
        if self.capture is not None:
            self.capture.rules = self.capture.rules + program
        else:
            self.block.rules = self.block.rules + program

    def add_annotation(self, seg: AnnotationText):
        self.capture = None
        _AnnotationParser(self, seg).run()

    def finish(self):
        if len(self.stack) > 1:
            b = self.block
            raise OverlappingBlocks(f"block {b.name!r} is never closed", b.location)

    # elements

    def open_block(self, name: str, location: Location) -> Block:
        if name in self.names:
            raise DuplicateBlockName(f"duplicate block name {name!r}", location)
        block = Block(name=name, location=location, parent=self.block)
        self.names[name] = block
        self.block.children.append(block)
        self.stack.append(block)
        return block

    def close_block(self, location: Location):
        if len(self.stack) == 1:
            raise OverlappingBlocks("'}' without an open block", location)
        self.stack.pop().end = location

    def add_atom_decl(self, decl: AtomDecl):
        block = self.block
        if any(d.signature == decl.signature for d in block.atom_decls):
            self.warn(
                "DuplicateDeclaration",
                f"@atom {decl.signature} declared twice in block {block.name}",
                decl.location,
                "error",
            )
            return
        for outer in block.path()[:-1]:
            if any(d.signature == decl.signature for d in outer.atom_decls):
                self.warn(
                    "ShadowedDeclaration",
                    f"@atom {decl.signature} shadows the declaration in block {outer.name}",
                    decl.location,
                )
                break
        block.atom_decls.append(decl)

    def add_term_decl(self, decl: TermDecl):
        block = self.block
        for outer in block.path()[:-1]:
            shadowed = {n for d in outer.term_decls for n in d.names} & set(decl.names)
            if shadowed:
                self.warn(
                    "ShadowedDeclaration",
                    f"@term {', '.join(sorted(shadowed))} shadows the declaration in block {outer.name}",
                    decl.location,
                )
                break
        block.term_decls.append(decl)


class _AnnotationParser:
    """Parses the content of one annotation environment."""

    def __init__(self, builder: _Builder, seg: AnnotationText):
        self.b = builder
        self.text = seg.content
        self.smap = SourceMap(seg.content, seg.start.file, seg.start.line, seg.start.column)
        self.described: Optional[_Described] = None
        self.term: Optional[TermDecl] = None
        self.test: Optional[TestCase] = None
        self.test_atoms: Optional[tuple] = None
        self.mode_given = False

    def loc(self, offset: int) -> Location:
        return self.smap.location(offset)

    def describe(self, element):
        if self.described is not None:
            self.described.flush()
        self.described = _Described(element)

    def leftover(self, text: str, offset: int):
        if not text.strip():
            return
        if self.described is None:
            self.b.warn("StrayText", f"text {text.strip()[:40]!r} is not attached to any element", self.loc(offset))
        else:
            self.described.parts.append(text)

    def section_end(self, pos: int) -> int:
        """Offset of the next keyword or closing brace at or after ``pos``."""
        m = _KEYWORD.search(self.text, pos)
        end = m.start() if m else len(self.text)
        brace = self.text.find("}", pos, end)
        return end if brace < 0 else brace

    def run(self):
        text = self.text
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            if text[pos] == "}":
                self.b.close_block(self.loc(pos))
                self.described = self.flush_described()
                pos += 1
                continue
            m = _KEYWORD.match(text, pos)
            if m is None:
                end = self.section_end(pos + 1)
                self.leftover(text[pos:end], pos)
                pos = end
                continue
            keyword = m.group(1)
            handler = getattr(self, f"kw_{keyword}", None)
            if handler is None and keyword in Mode.NAMES:
                handler = self.kw_mode
            if handler is None:
                self.b.warn("UnknownKeyword", f"unknown keyword @{keyword} skipped", self.loc(pos))
                pos = self.section_end(m.end())
                continue
            pos = handler(keyword, m.start(), m.end())
        self.flush_described()
        self.finish_test()

    def flush_described(self):
        if self.described is not None:
            self.described.flush()
        return None

    # block structure

    def kw_block(self, kw, start, pos):
        m = _NAME.match(self.text, pos)
        if m is None or m.group(1) == "{":
            name = f"block@{self.loc(start).line}"
        else:
            name = m.group(1)
            pos = m.end()
        rest = self.text[pos:]
        if not rest.lstrip().startswith("{"):
            raise MalformedAnnotation("expected '{' after @block name", self.loc(start))
        pos += len(rest) - len(rest.lstrip()) + 1
        block = self.b.open_block(name, self.loc(start))
        self.describe(block)
        end = self.section_end(pos)
        self.leftover(self.text[pos:end], pos)
        return end

    def kw_atom(self, kw, start, pos):
        m = re.compile(r"\s*([a-z][\w']*)\s*(?:\(([^)]*)\))?").match(self.text, pos)
        if m is None:
            raise MalformedAnnotation("expected a predicate after @atom", self.loc(start))
        names = ()
        if m.group(2) is not None:
            names = tuple(n.strip() for n in m.group(2).split(","))
            if not all(re.fullmatch(r"[A-Za-z_][\w']*", n) for n in names):
                raise MalformedAnnotation(f"malformed term list in @atom {m.group(0).strip()}", self.loc(start))
        decl = AtomDecl(m.group(1), names, location=self.loc(start))
        self.b.add_atom_decl(decl)
        self.describe(decl)
        end = self.section_end(m.end())
        self.leftover(self.text[m.end() : end], m.end())
        return end

    def kw_term(self, kw, start, pos):
        m = _NAME_LIST.match(self.text, pos)
        if m is None:
            raise MalformedAnnotation("expected term names after @term", self.loc(start))
        names = tuple(n.strip() for n in m.group(0).split(","))
        decl = TermDecl(names, location=self.loc(start))
        self.b.add_term_decl(decl)
        self.term = decl
        self.describe(decl)
        end = self.section_end(m.end())
        self.leftover(self.text[m.end() : end], m.end())
        return end

    def _type_target(self, kw, start) -> TermDecl:
        if self.term is None:
            raise MalformedAnnotation(f"@{kw} must follow @term", self.loc(start))
        if self.term.type_spec is not None:
            raise MalformedAnnotation(f"term {', '.join(self.term.names)} already has a type", self.loc(start))
        return self.term

    def kw_from(self, kw, start, pos):
        decl = self._type_target(kw, start)
        end = self.section_end(pos)
        loc = self.loc(pos)
        try:
            terms, stop = parse_term_list_prefix(self.text[pos:end], loc.file, loc.line, loc.column)
        except AspSyntaxError as exc:
            raise MalformedAnnotation(f"malformed @from list: {exc.message}", exc.location) from None
        members = []
        for t in terms:
            if isinstance(t, Interval):
                members.extend(Number(v) for v in range(t.lo, t.hi + 1))
            elif is_ground_term(t):
                members.append(t)
            else:
                raise MalformedAnnotation(f"@from expects ground terms, got {t}", self.loc(start))
        decl.type_spec = FromList(tuple(members))
        self.leftover(self.text[pos + stop : end], pos + stop)
        return end

    def kw_with(self, kw, start, pos):
        decl = self._type_target(kw, start)
        end = self.section_end(pos)
        loc = self.loc(pos)
        try:
            body, stop = parse_body_prefix(self.text[pos:end], loc.file, loc.line, loc.column)
        except AspSyntaxError as exc:
            raise MalformedAnnotation(f"malformed @with body: {exc.message}", exc.location) from None
        if not any("#V" in set(el.variables()) for el in body):
            raise MalformedAnnotation("@with body must mention #V", self.loc(start))
        code, description = [], []
        offset = pos + stop
        for line in self.text[offset:end].splitlines(keepends=True):
            stripped = line.strip()
            if stripped.endswith("."):
                lloc = self.loc(offset + len(line) - len(line.lstrip()))
                try:
                    code.append(parse_asp(stripped, lloc.file, lloc.line, lloc.column))
                    offset += len(line)
                    continue
                except LanaError:
                    pass
            description.append(line)
            offset += len(line)
        decl.type_spec = WithBody(tuple(body), Program.concat(code))
        self.leftover("".join(description), pos + stop)
        return end

    def kw_samerangeas(self, kw, start, pos):
        decl = self._type_target(kw, start)
        m = re.compile(r"\s*([A-Za-z_][\w']*)").match(self.text, pos)
        if m is None:
            raise MalformedAnnotation("expected a term name after @samerangeas", self.loc(start))
        decl.type_spec = SameRangeAs(m.group(1))
        end = self.section_end(m.end())
        self.leftover(self.text[m.end() : end], m.end())
        return end

    def _signature(self, kw, start, pos):
        end = self.section_end(pos)
        entries = []
        i = pos
        while True:
            m = _SIG_ENTRY.match(self.text, i)
            if m is None or m.end() > end:
                raise MalformedSignatureList(f"expected name/arity in @{kw} list", self.loc(i))
            entries.append(Signature(m.group(1), int(m.group(2))))
            i = m.end()
            comma = re.compile(r"\s*,").match(self.text, i)
            if comma is None or comma.end() > end:
                break
            i = comma.end()
        self.describe(self.b.block)
        self.leftover(self.text[i:end], i)
        return entries, end

    def kw_input(self, kw, start, pos):
        entries, end = self._signature(kw, start, pos)
        block = self.b.block
        if not block.input_sig:
            block.input_keyword = kw
        block.input_sig.extend(e for e in entries if e not in block.input_sig)
        return end

    kw_requires = kw_input

    def kw_output(self, kw, start, pos):
        entries, end = self._signature(kw, start, pos)
        block = self.b.block
        if not block.output_sig:
            block.output_keyword = kw
        block.output_sig.extend(e for e in entries if e not in block.output_sig)
        return end

    kw_defines = kw_output

    # conditions

    def _environment(self, start, pos) -> tuple[int, int]:
        """Offsets just inside the braces of a ``{ ... }`` environment."""
        open_ = self.text.find("{", pos)
        if open_ < 0 or self.text[pos:open_].strip():
            raise MalformedAnnotation("expected '{'", self.loc(start))
        depth = 0
        for i in range(open_, len(self.text)):
            if self.text[i] == "{":
                depth += 1
            elif self.text[i] == "}":
                depth -= 1
                if depth == 0:
                    return open_ + 1, i
        raise MalformedAnnotation("condition is not closed with '}' in its annotation", self.loc(start))

    def _condition(self, kind, kw, start, pos):
        m = _NAME.match(self.text, pos)
        if m is None:
            raise MalformedAnnotation(f"expected a name after @{kw}", self.loc(start))
        inner, close = self._environment(start, m.end())
        mode_m = re.compile(r"(?<![\w.@])@(always|never)\b").search(self.text, inner, close)
        if mode_m is None:
            raise MalformedAnnotation(f"@{kw} {m.group(1)} needs @always or @never", self.loc(start))
        description = _clean_description([self.text[inner : mode_m.start()]])
        apos = mode_m.end()
        loc = self.loc(apos)
        try:
            atoms, stop = parse_atom_list_prefix(self.text[apos:close], loc.file, loc.line, loc.column)
        except AspSyntaxError as exc:
            raise MalformedAnnotation(f"malformed atom list: {exc.message}", exc.location) from None
        for atom in atoms:
            if not atom.is_ground:
                raise NonGroundTestAtom(f"condition atom {atom} is not ground", loc)
        code_start = apos + stop
        cloc = self.loc(code_start)
        rules = parse_asp(self.text[code_start:close], cloc.file, cloc.line, cloc.column)
        cond = Condition(
            kind, m.group(1), description, mode_m.group(1), tuple(atoms), rules, self.loc(start)
        )
        self.b.block.conditions.append(cond)
        self.flush_described()
        self.described = None
        return close + 1

    def kw_precon(self, kw, start, pos):
        return self._condition("precondition", kw, start, pos)

    def kw_postcon(self, kw, start, pos):
        return self._condition("postcondition", kw, start, pos)

    def kw_assert(self, kw, start, pos):
        return self._condition("assert", kw, start, pos)

    def kw_always(self, kw, start, pos):
        raise MalformedAnnotation(f"@{kw} outside of a condition", self.loc(start))

    kw_never = kw_always

    # test cases

    def kw_testcase(self, kw, start, pos):
        self.finish_test()
        m = re.compile(r"[ \t]*([A-Za-z_][\w']*)(?=\s|$)").match(self.text, pos)
        name = None
        if m is not None:
            name = m.group(1)
            pos = m.end()
        test = TestCase(name, location=self.loc(start))
        self.test = test
        self.b.test_cases.append(test)
        self.b.capture = test
        self.describe(test)
        end = self.section_end(pos)
        self.leftover(self.text[pos:end], pos)
        return end

    def _test_target(self, kw, start) -> TestCase:
        if self.test is None:
            raise MalformedAnnotation(f"@{kw} must follow @testcase", self.loc(start))
        return self.test

    def kw_scope(self, kw, start, pos):
        test = self._test_target(kw, start)
        m = _NAME_LIST.match(self.text, pos)
        if m is None:
            raise MalformedAnnotation("expected block names after @scope", self.loc(start))
        test.scope = test.scope + tuple(n.strip() for n in m.group(0).split(","))
        end = self.section_end(m.end())
        self.leftover(self.text[m.end() : end], m.end())
        return end

    def kw_testatoms(self, kw, start, pos):
        self._test_target(kw, start)
        end = self.section_end(pos)
        loc = self.loc(pos)
        try:
            atoms, stop = parse_atom_list_prefix(self.text[pos:end], loc.file, loc.line, loc.column)
        except AspSyntaxError as exc:
            raise MalformedAnnotation(f"malformed @testatoms list: {exc.message}", exc.location) from None
        for atom in atoms:
            if not atom.is_ground:
                raise NonGroundTestAtom(f"test atom {atom} is not ground", loc)
        if self.test_atoms is not None and not self.mode_given:
            raise MalformedAnnotation("@testatoms without a mode", self.loc(start))
        self.test_atoms = tuple(atoms)
        self.mode_given = False
        self.leftover(self.text[pos + stop : end], pos + stop)
        return end

    def kw_mode(self, kw, start, pos):
        test = self._test_target(kw, start)
        if self.test_atoms is None:
            raise MalformedAnnotation(f"@{kw} must follow @testatoms", self.loc(start))
        n = None
        if "inat" in kw:
            m = re.compile(r"\s*(\d+)").match(self.text, pos)
            if m is None or int(m.group(1)) < 1:
                raise MalformedAnnotation(f"@{kw} needs a positive integer", self.loc(start))
            n = int(m.group(1))
            pos = m.end()
        test.conditions.append(TestAtoms(self.test_atoms, Mode(kw, n)))
        self.mode_given = True
        end = self.section_end(pos)
        self.leftover(self.text[pos:end], pos)
        return end

    def kw_testhasanswerset(self, kw, start, pos):
        self._test_target(kw, start).conditions.append(HasAnswerSet())
        end = self.section_end(pos)
        self.leftover(self.text[pos:end], pos)
        return end

    def kw_testnoanswerset(self, kw, start, pos):
        self._test_target(kw, start).conditions.append(NoAnswerSet())
        end = self.section_end(pos)
        self.leftover(self.text[pos:end], pos)
        return end

    def finish_test(self):
        test = self.test
        if test is None:
            return
        where = test.location
        label = f"test case {test.name}" if test.name else "test case"
        if self.test_atoms is not None and not self.mode_given:
            raise MalformedAnnotation("@testatoms without a mode", where)
        if not test.scope:
            raise MalformedAnnotation(f"{label} has no @scope", where)
        if not test.conditions:
            raise MalformedAnnotation(f"{label} has no test condition", where)
        self.test = None
        self.test_atoms = None
        self.mode_given = False


# --- entry points ------------------------------------------------------------------


def parse_lana(segments: list[Segment], file: str = "<string>", root: Optional[Block] = None):
    """Build the block tree of one source file.

    Returns ``(program, diagnostics)``.  When ``root`` is given the file's
    blocks are attached below it instead of a fresh default block.
    """
    if root is None:
        root = Block(name=Path(file).name, is_default=True)
    builder = _Builder(file, root)
    for seg in segments:
        if isinstance(seg, AnnotationText):
            builder.add_annotation(seg)
        else:
            builder.add_rules(seg)
    builder.finish()
    ap = AnnotatedProgram(root, builder.test_cases, [file])
    return ap, builder.diagnostics


def parse_source(text: str, file: str = "<string>"):
    """Parse one annotated source file; returns ``(program, diagnostics)``."""
    ap, diagnostics = parse_lana(extract_annotations(text, file), file)
    ap.sources[file] = text
    return ap, diagnostics


def parse_sources(sources: dict):
    """Parse several files into one program.

    ``sources`` maps file names to text.  A single file keeps its own
    default block as root; several files get a synthetic root named
    ``program`` with one default child per file, in file-name order.
    """
    files = sorted(sources)
    if len(files) == 1:
        return parse_source(sources[files[0]], files[0])
    root = Block(name=PROGRAM_ROOT, is_default=True)
    test_cases, diagnostics = [], []
    seen: dict = {}
    for file in files:
        default = Block(name=Path(file).name, parent=root, is_default=True)
        if default.name in seen or default.name == PROGRAM_ROOT:
            raise DuplicateBlockName(f"duplicate default block name {default.name!r}")
        ap, diags = parse_lana(extract_annotations(sources[file], file), file, default)
        for block in default.walk():
            if block.name in seen:
                raise DuplicateBlockName(f"duplicate block name {block.name!r}", block.location)
            seen[block.name] = block
        root.children.append(default)
        test_cases.extend(ap.test_cases)
        diagnostics.extend(diags)
    return AnnotatedProgram(root, test_cases, files, dict(sources)), diagnostics


def read_program(paths) -> tuple[AnnotatedProgram, list[Diagnostic]]:
    """Read and parse program files from disk."""
    sources = {str(p): Path(p).read_text(encoding="utf-8") for p in paths}
    return parse_sources(sources)


# --- test-suite files ---------------------------------------------------------------

SOLVER_TYPES = {"dlv": "DLV", "clasp": "clasp", "clingo": "clingo", "internal": "internal"}


@dataclass
class SuiteConfig:
    name: str
    description: str = ""
    program_files: list = field(default_factory=list)
    program_dir: Path = Path(".")
    test_files: list = field(default_factory=list)
    test_dir: Path = Path(".")
    solver_type: str = "internal"
    solver_cmd: Optional[str] = None
    grounder_cmd: Optional[str] = None

    def program_paths(self) -> list[Path]:
        return [self.program_dir / f for f in self.program_files]

    def test_paths(self) -> list[Path]:
        return [self.test_dir / f for f in self.test_files]


_SUITE_LINE = re.compile(r"@(\w+)[ \t]*(.*)")


def parse_testsuite(text: str, path="suite") -> SuiteConfig:
    """Read a test-suite file.

    ``path`` is the suite file's own path: it supplies the default name
    and the directory that relative ``@programdir``/``@testdir`` values and
    omitted directories refer to.
    """
    path = Path(path)
    base = path.parent
    fields: dict = {}
    programs, tests, description = [], [], []
    last = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        m = _SUITE_LINE.match(line)
        if m is None:
            if last == "testsuite":
                description.append(line)
            continue
        key, value = m.group(1).lower(), m.group(2).strip()
        last = key
        if key == "program":
            programs.extend(v for v in re.split(r"[\s,]+", value) if v)
        elif key == "test":
            tests.extend(v for v in re.split(r"[\s,]+", value) if v)
        elif key in ("testsuite", "programdir", "testdir", "solvertype", "solver", "grounder"):
            fields[key] = value
        else:
            raise MalformedAnnotation(f"unknown test-suite keyword @{key}", Location(str(path), lineno, 1))
    if not programs:
        raise MissingField("test suite has no @program entry")
    if not tests:
        raise MissingField("test suite has no @test entry")
    if not fields.get("solvertype"):
        raise MissingField("test suite has no @solvertype")
    solver_type = SOLVER_TYPES.get(fields["solvertype"].lower())
    if solver_type is None:
        raise UnknownSolverType(f"unknown solver type {fields['solvertype']!r}")
    grounder = fields.get("grounder") or None
    if solver_type == "clasp" and grounder is None:
        raise GrounderRequired("solver type clasp needs a @grounder command")
    return SuiteConfig(
        name=fields.get("testsuite") or path.name,
        description=_clean_description(description),
        program_files=programs,
        program_dir=base / fields.get("programdir", "."),
        test_files=tests,
        test_dir=base / fields.get("testdir", "."),
        solver_type=solver_type,
        solver_cmd=fields.get("solver") or None,
        grounder_cmd=grounder,
    )


def read_testsuite(path) -> SuiteConfig:
    return parse_testsuite(Path(path).read_text(encoding="utf-8"), path)
