"""Tokenizer and recursive-descent parser for gringo-style rule text.

Besides :func:`parse_asp` the module exposes prefix parsers
(:func:`parse_term_list_prefix`, :func:`parse_atom_list_prefix`,
:func:`parse_body_prefix`) used by the annotation parser, which needs to
read a list of terms or literals and hand the remaining text back as
free-form description.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass
from typing import Optional

from ..errors import AspSyntaxError, SafetyError
from .syntax import (
    COMPARISON_OPS,
    Arith,
    Atom,
    Choice,
    ChoiceElement,
    Comparison,
    Function,
    Interval,
    Literal,
    Location,
    Number,
    Program,
    Rule,
    SymConst,
    Variable,
    term_variables,
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<blockcomment>%\*.*?\*%)
  | (?P<opencomment>%\*)
  | (?P<linecomment>%[^\n]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<number>\d+)
  | (?P<ident>[a-z][A-Za-z0-9_']*)
  | (?P<variable>_*[A-Z][A-Za-z0-9_']*|_)
  | (?P<directive>\#[A-Za-z]+)
  | (?P<punct>:-|\.\.|!=|<>|<=|>=|==|[=<>(){},;:.+\-|])
    """,
    re.VERBOSE | re.DOTALL,
)

_SKIPPED_DIRECTIVES = {"#show", "#hide"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


class SourceMap:
    """Maps offsets in ``text`` to file positions."""

    def __init__(self, text: str, file: str = "<string>", line: int = 1, column: int = 1):
        self.text = text
        self.file = file
        self.line = line
        self.column = column
        self._line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def location(self, offset: int) -> Location:
        idx = bisect_right(self._line_starts, offset) - 1
        col = offset - self._line_starts[idx]
        if idx == 0:
            return Location(self.file, self.line, self.column + col)
        return Location(self.file, self.line + idx, 1 + col)


def tokenize(source: SourceMap) -> list[Token]:
    tokens = []
    text = source.text
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise AspSyntaxError(f"unexpected character {text[pos]!r}", source.location(pos))
        kind = m.lastgroup
        if kind == "opencomment":
            raise AspSyntaxError("unterminated block comment", source.location(pos))
        if kind not in ("ws", "blockcomment", "linecomment"):
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, file: str = "<string>", line: int = 1, column: int = 1):
        self.source = SourceMap(text, file, line, column)
        self.tokens = tokenize(self.source)
        self.pos = 0
        self._anon = 0

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        return self.tok.kind in ("punct", "ident", "directive") and self.tok.text == text

    def advance(self) -> Token:
        tok = self.tok
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def fail(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise AspSyntaxError(f"{message}, found {found}", self.source.location(tok.offset))

    def location(self, tok: Token) -> Location:
        return self.source.location(tok.offset)

    # terms

    def term(self):
        start = self.tok
        left = self.additive()
        if self.at(".."):
            self.advance()
            right = self.additive()
            if not (isinstance(left, Number) and isinstance(right, Number)):
                self.fail("interval bounds must be integer constants", start)
            if left.value > right.value:
                self.fail(f"empty interval {left}..{right}", start)
            return Interval(left.value, right.value)
        return left

    def additive(self):
        left = self.unary()
        while self.at("+") or self.at("-"):
            op = self.advance().text
            left = Arith(op, left, self.unary())
        return left

    def unary(self):
        if self.at("-"):
            self.advance()
            operand = self.unary()
            if isinstance(operand, Number):
                return Number(-operand.value)
            return Arith("-", Number(0), operand)
        return self.primary()

    def primary(self):
        tok = self.tok
        if tok.kind == "number":
            self.advance()
            return Number(int(tok.text))
        if tok.kind == "string":
            self.advance()
            body = re.sub(r"\\(.)", r"\1", tok.text[1:-1])
            return SymConst(body, quoted=True)
        if tok.kind == "variable":
            self.advance()
            if tok.text == "_":
                self._anon += 1
                return Variable(f"_{self._anon}")
            return Variable(tok.text)
        if tok.kind == "directive" and tok.text == "#V":
            self.advance()
            return Variable("#V")
        if tok.kind == "ident" and tok.text != "not":
            self.advance()
            if self.at("("):
                self.advance()
                args = self.term_list(")")
                self.expect(")")
                return Function(tok.text, tuple(args))
            return SymConst(tok.text)
        if self.at("("):
            self.advance()
            inner = self.term()
            self.expect(")")
            return inner
        self.fail("expected a term")

    def term_list(self, closer: str) -> list:
        if self.at(closer):
            return []
        terms = [self.term()]
        while self.at(","):
            self.advance()
            terms.append(self.term())
        return terms

    # atoms and literals

    def to_atom(self, term, tok: Token) -> Atom:
        if isinstance(term, SymConst) and not term.quoted:
            return Atom(term.name, ())
        if isinstance(term, Function):
            return Atom(term.name, term.args)
        self.fail("expected an atom", tok)

    def atom(self) -> Atom:
        tok = self.tok
        if tok.kind != "ident" or tok.text == "not":
            self.fail("expected an atom")
        return self.to_atom(self.primary(), tok)

    def body_element(self):
        if self.at("not") and self.peek().kind == "ident":
            self.advance()
            return Literal(self.atom(), negated=True)
        tok = self.tok
        left = self.term()
        op = self.tok.text if self.tok.kind == "punct" else None
        if op in COMPARISON_OPS or op in ("==", "<>"):
            self.advance()
            op = {"==": "=", "<>": "!="}.get(op, op)
            return Comparison(op, left, self.term())
        return Literal(self.to_atom(left, tok))

    def body(self) -> list:
        elements = [self.body_element()]
        while self.at(",") or self.at(";"):
            self.advance()
            elements.append(self.body_element())
        return elements

    # heads

    def choice_element(self) -> ChoiceElement:
        atom = self.atom()
        conditions = []
        while self.at(":"):
            self.advance()
            conditions.append(self.body_element())
        return ChoiceElement(atom, tuple(conditions))

    def bound(self) -> int:
        tok = self.tok
        negative = False
        if self.at("-"):
            self.advance()
            negative = True
        if self.tok.kind != "number":
            self.fail("choice bounds must be integer constants", tok)
        value = int(self.advance().text)
        return -value if negative else value

    def choice(self) -> Choice:
        lower = upper = None
        if not self.at("{"):
            lower = self.bound()
        self.expect("{")
        elements = []
        if not self.at("}"):
            elements.append(self.choice_element())
            while self.at(";") or self.at(","):
                self.advance()
                elements.append(self.choice_element())
        self.expect("}")
        if self.tok.kind == "number":
            upper = self.bound()
        elif self.tok.kind == "punct" and self.tok.text in ("=", "==", "<=", ">=", "<", ">"):
            op = self.advance().text
            value = self.bound()
            if op in ("=", "=="):
                lower = upper = value
            elif op == ">=":
                lower = value
            elif op == ">":
                lower = value + 1
            elif op == "<=":
                upper = value
            else:
                upper = value - 1
        return Choice(tuple(elements), lower, upper)

    def rule(self) -> Optional[Rule]:
        start = self.tok
        if start.kind == "directive" and start.text in _SKIPPED_DIRECTIVES:
            while not self.at(".") and self.tok.kind != "eof":
                self.advance()
            self.expect(".")
            return None
        if start.kind == "directive" and start.text != "#V":
            self.fail("unsupported directive")
        self._anon = 0
        if self.at(":-"):
            head = None
        elif self.at("{") or (self.tok.kind == "number" and self.peek().text == "{"):
            head = self.choice()
        else:
            head = self.atom()
            if self.at("|") or self.at(";"):
                self.fail("disjunctive heads are not supported")
        body = []
        if self.at(":-"):
            self.advance()
            if not self.at("."):
                body = self.body()
        elif head is None:
            self.fail("expected ':-'")
        self.expect(".")
        rule = Rule(head, tuple(body), self.location(start))
        check_safety(rule)
        return rule

    def program(self) -> Program:
        rules = []
        while self.tok.kind != "eof":
            rule = self.rule()
            if rule is not None:
                rules.append(rule)
        return Program(tuple(rules))


def _binding_variables(term):
    # variables under arithmetic are not bound by matching
    if isinstance(term, Variable):
        yield term.name
    elif isinstance(term, Function):
        for arg in term.args:
            yield from _binding_variables(arg)


def _bound_by(elements, bound: set[str]) -> set[str]:
    """Variables made safe by ``elements`` given already-safe ``bound``."""
    bound = set(bound)
    for el in elements:
        if isinstance(el, Literal) and not el.negated:
            for arg in el.atom.args:
                bound.update(_binding_variables(arg))
    changed = True
    while changed:
        changed = False
        for el in elements:
            if not isinstance(el, Comparison) or el.op != "=":
                continue
            for target, source in ((el.left, el.right), (el.right, el.left)):
                if (
                    isinstance(target, Variable)
                    and target.name not in bound
                    and set(term_variables(source)) <= bound
                ):
                    bound.add(target.name)
                    changed = True
    return bound


def check_safety(rule: Rule) -> None:
    """Raise :class:`SafetyError` naming the first unsafe variable of ``rule``."""
    safe = _bound_by(rule.body, set())

    def require(names, bound):
        for name in names:
            if name not in bound:
                # generated names of anonymous variables are "_<n>"
                raise SafetyError("_" if name[1:].isdigit() else name, rule.location)

    for el in rule.body:
        require(el.variables(), safe)
    if isinstance(rule.head, Atom):
        require(rule.head.variables(), safe)
    elif isinstance(rule.head, Choice):
        for element in rule.head.elements:
            local = _bound_by(element.conditions, safe)
            require(element.atom.variables(), local)
            for cond in element.conditions:
                require(cond.variables(), local)


def parse_asp(text: str, file: str = "<string>", line: int = 1, column: int = 1) -> Program:
    """Parse rule text into a :class:`Program`.

    ``line``/``column`` give the position of ``text`` inside ``file`` so that
    rule locations point into the original source.
    """
    return _Parser(text, file, line, column).program()


def parse_rule(text: str) -> Rule:
    program = parse_asp(text)
    if len(program) != 1:
        raise AspSyntaxError(f"expected exactly one rule, got {len(program)}")
    return program.rules[0]


def parse_term(text: str):
    p = _Parser(text)
    term = p.term()
    if p.tok.kind != "eof":
        p.fail("unexpected trailing input")
    return term


def parse_atom(text: str) -> Atom:
    p = _Parser(text)
    atom = p.atom()
    if p.tok.kind != "eof":
        p.fail("unexpected trailing input")
    return atom


def parse_atoms(text: str) -> list[Atom]:
    """Parse a sequence of atoms separated by whitespace and/or commas."""
    p = _Parser(text)
    atoms = []
    while p.tok.kind != "eof":
        atoms.append(p.atom())
        if p.at(","):
            p.advance()
    return atoms


def _prefix(text: str, parse_item, file: str, line: int, column: int):
    """Parse ``item ("," item)*`` from the start of ``text``.

    Returns the items and the character offset where parsing stopped.  The
    text after the list need not be valid ASP, so tokenizing is done lazily
    on the longest tokenizable prefix.
    """
    p = _Parser.__new__(_Parser)
    p.source = SourceMap(text, file, line, column)
    p.tokens = _lazy_tokens(p.source)
    p.pos = 0
    p._anon = 0
    items = [parse_item(p)]
    while p.at(","):
        p.advance()
        items.append(parse_item(p))
    return items, p.tok.offset


def _lazy_tokens(source: SourceMap) -> list[Token]:
    tokens = []
    text = source.text
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.lastgroup == "opencomment":
            break
        if m.lastgroup not in ("ws", "blockcomment", "linecomment"):
            tokens.append(Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    end = len(text) if pos >= len(text) else pos
    tokens.append(Token("eof", "", end))
    return tokens


def parse_term_list_prefix(text: str, file="<string>", line=1, column=1):
    return _prefix(text, _Parser.term, file, line, column)


def parse_atom_list_prefix(text: str, file="<string>", line=1, column=1):
    return _prefix(text, _Parser.atom, file, line, column)


def parse_body_prefix(text: str, file="<string>", line=1, column=1):
    return _prefix(text, _Parser.body_element, file, line, column)
