"""The block-structured program model built from annotations.

Model objects are plain dataclasses filled in by :mod:`lana.annotations`
and treated as read-only afterwards.  Locations never take part in
equality, so two parses of equivalent sources compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator, Optional, Union

from .asp.syntax import Atom, Location, Program, Rule
from .errors import UnknownBlock

#: Root block name used when several files form one program.
PROGRAM_ROOT = "program"


@dataclass(frozen=True, order=True)
class Signature:
    predicate: str
    arity: int

    def __str__(self) -> str:
        return f"{self.predicate}/{self.arity}"


@dataclass
class AtomDecl:
    predicate: str
    term_names: tuple
    description: str = ""
    location: Optional[Location] = field(default=None, compare=False, repr=False)

    @property
    def signature(self) -> Signature:
        return Signature(self.predicate, len(self.term_names))

    def __str__(self) -> str:
        if not self.term_names:
            return self.predicate
        return f"{self.predicate}({','.join(self.term_names)})"


@dataclass(frozen=True)
class FromList:
    terms: tuple


@dataclass(frozen=True)
class WithBody:
    body: tuple
    code: Program = Program()


@dataclass(frozen=True)
class SameRangeAs:
    term_name: str


TypeSpec = Union[FromList, WithBody, SameRangeAs]


@dataclass
class TermDecl:
    names: tuple
    description: str = ""
    type_spec: Optional[TypeSpec] = None
    location: Optional[Location] = field(default=None, compare=False, repr=False)


@dataclass
class Condition:
    kind: str  # "assert" | "precondition" | "postcondition"
    name: str
    description: str
    mode: str  # "always" | "never"
    test_atoms: tuple
    rules: Program = Program()
    location: Optional[Location] = field(default=None, compare=False, repr=False)

    @property
    def keyword(self) -> str:
        return {"assert": "@assert", "precondition": "@precon", "postcondition": "@postcon"}[
            self.kind
        ]


# --- test conditions -------------------------------------------------------------


@dataclass(frozen=True)
class Mode:
    """Entailment mode of a ``@testatoms`` condition, e.g. ``@trueinatleast 1``."""

    name: str  # trueinall, trueinatleast, trueinatmost, falseinall, ...
    n: Optional[int] = None

    NAMES = (
        "trueinall",
        "trueinatleast",
        "trueinatmost",
        "falseinall",
        "falseinatleast",
        "falseinatmost",
    )

    @property
    def polarity(self) -> bool:
        return self.name.startswith("true")

    @property
    def quantifier(self) -> str:
        return self.name.split("in", 1)[1]  # "all", "atleast" or "atmost"

    def __str__(self) -> str:
        return f"@{self.name}" if self.n is None else f"@{self.name} {self.n}"


@dataclass(frozen=True)
class HasAnswerSet:
    def __str__(self) -> str:
        return "@testhasanswerset"


@dataclass(frozen=True)
class NoAnswerSet:
    def __str__(self) -> str:
        return "@testnoanswerset"


@dataclass(frozen=True)
class TestAtoms:
    atoms: tuple
    mode: Mode

    __test__ = False  # keep pytest from collecting this class

    def __str__(self) -> str:
        return f"{self.mode} {', '.join(map(str, self.atoms))}"


TestCondition = Union[HasAnswerSet, NoAnswerSet, TestAtoms]


@dataclass
class TestCase:
    name: Optional[str]
    description: str = ""
    scope: tuple = ()
    conditions: list = field(default_factory=list)
    rules: Program = Program()
    location: Optional[Location] = field(default=None, compare=False, repr=False)

    __test__ = False


# --- blocks --------------------------------------------------------------------------


@dataclass
class Block:
    name: str
    description: str = ""
    atom_decls: list = field(default_factory=list)
    term_decls: list = field(default_factory=list)
    input_sig: list = field(default_factory=list)
    output_sig: list = field(default_factory=list)
    input_keyword: str = "input"
    output_keyword: str = "output"
    conditions: list = field(default_factory=list)
    rules: Program = Program()
    children: list = field(default_factory=list)
    location: Optional[Location] = field(default=None, compare=False, repr=False)
    end: Optional[Location] = field(default=None, compare=False, repr=False)
    parent: Optional["Block"] = field(default=None, compare=False, repr=False)
    is_default: bool = field(default=False, compare=False, repr=False)

    @property
    def declares_signatures(self) -> bool:
        return bool(self.input_sig or self.output_sig)

    def walk(self) -> Iterator["Block"]:
        """This block and all descendants, pre-order."""
        yield self
        for child in self.children:
            yield from child.walk()

    def path(self) -> list["Block"]:
        """Blocks from the root down to this one."""
        chain = []
        block: Optional[Block] = self
        while block is not None:
            chain.append(block)
            block = block.parent
        return chain[::-1]

    def all_rules(self) -> list[Rule]:
        return [rule for block in self.walk() for rule in block.rules]


@dataclass
class AnnotatedProgram:
    root: Block
    test_cases: list = field(default_factory=list)
    source_files: list = field(default_factory=list)
    sources: dict = field(default_factory=dict, compare=False, repr=False)

    def blocks(self) -> Iterator[Block]:
        return self.root.walk()

    def find_block(self, name: str) -> Optional[Block]:
        return find_block(self, name)

    def location_key(self, location: Optional[Location]) -> tuple:
        if location is None:
            return (len(self.source_files), 0, 0)
        try:
            index = self.source_files.index(location.file)
        except ValueError:
            index = len(self.source_files)
        return (index, location.line, location.column)


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning" | "info"
    code: str
    message: str
    location: Optional[Location] = None

    def sort_key(self) -> tuple:
        loc = self.location
        return (loc.file, loc.line, loc.column, self.code) if loc else ("", 0, 0, self.code)

    def __str__(self) -> str:
        where = str(self.location) if self.location else "-"
        return f"{self.severity} {self.code} {where} {self.message}"


# --- operations ---------------------------------------------------------------------


def find_block(ap: AnnotatedProgram, name: str) -> Optional[Block]:
    for block in ap.blocks():
        if block.name == name:
            return block
    return None


def effective_declarations(block: Block) -> tuple[list[AtomDecl], list[TermDecl]]:
    """Declarations visible in ``block``: inherited ones plus its own.

    Inner declarations shadow outer ones with the same signature (atoms) or
    the same name (terms).  A multi-name term declaration loses only the
    shadowed names.
    """
    atoms: list[AtomDecl] = []
    terms: list[TermDecl] = []
    for b in block.path():
        own_sigs = {d.signature for d in b.atom_decls}
        atoms = [d for d in atoms if d.signature not in own_sigs] + list(b.atom_decls)
        own_names = {n for d in b.term_decls for n in d.names}
        kept = []
        for d in terms:
            names = tuple(n for n in d.names if n not in own_names)
            if names == d.names:
                kept.append(d)
            elif names:
                kept.append(replace(d, names=names))
        terms = kept + list(b.term_decls)
    return atoms, terms


def scope_rules(ap: AnnotatedProgram, names) -> Program:
    """Rules of the named blocks and their descendants, in source order."""
    seen: dict = {}
    for name in names:
        block = find_block(ap, name)
        if block is None:
            raise UnknownBlock(name)
        for rule in block.all_rules():
            seen.setdefault(id(rule), rule)
    rules = sorted(seen.values(), key=lambda r: ap.location_key(r.location))
    return Program(tuple(rules))


def predicates_in(rules) -> list[Signature]:
    sigs = {Signature(*atom.signature) for rule in rules for atom in rule.atoms()}
    return sorted(sigs)


def hidden_atoms(block: Block) -> list[Signature]:
    """Predicates in the block's own rules that are in neither signature."""
    if not block.declares_signatures:
        return []
    declared = set(block.input_sig) | set(block.output_sig)
    return [s for s in predicates_in(block.rules) if s not in declared]


def atom_signature(atom: Atom) -> Signature:
    return Signature(atom.predicate, len(atom.args))
