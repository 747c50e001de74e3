"""Abstract syntax for (gringo-style) answer-set programs.

Every node is a frozen dataclass, so ground atoms can live in sets and
answer sets are plain frozensets of :class:`Atom`.  Source locations never
take part in equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union


@dataclass(frozen=True, order=True)
class Location:
    file: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


# --- terms -----------------------------------------------------------------


@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self) -> str:
        # anonymous variables are numbered "_<n>" internally
        if self.name[:1] == "_" and self.name[1:].isdigit():
            return "_"
        return self.name


@dataclass(frozen=True)
class Number:
    value: int

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class SymConst:
    """Symbolic constant; quoted strings and identifiers compare equal by content."""

    name: str
    quoted: bool = field(default=False, compare=False)

    def __str__(self) -> str:
        if self.quoted or not _is_identifier(self.name):
            escaped = self.name.replace("\\", "\\\\").replace('"', '\\"')
            return f'"{escaped}"'
        return self.name


@dataclass(frozen=True)
class Function:
    """Compound term ``f(t1,...,tn)``; grounded as inert structure."""

    name: str
    args: tuple

    def __str__(self) -> str:
        return f"{self.name}({','.join(map(str, self.args))})"


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval {self.lo}..{self.hi}")

    def __str__(self) -> str:
        return f"{self.lo}..{self.hi}"


@dataclass(frozen=True)
class Arith:
    op: str  # "+" or "-"
    left: "Term"
    right: "Term"

    def __str__(self) -> str:
        right = f"({self.right})" if isinstance(self.right, Arith) else str(self.right)
        return f"{self.left}{self.op}{right}"


Term = Union[Variable, Number, SymConst, Function, Interval, Arith]
GroundTerm = Union[Number, SymConst, Function]


def _is_identifier(name: str) -> bool:
    return bool(name) and name[0].islower() and all(c.isalnum() or c == "_" for c in name)


def term_variables(term) -> Iterator[str]:
    if isinstance(term, Variable):
        yield term.name
    elif isinstance(term, Function):
        for arg in term.args:
            yield from term_variables(arg)
    elif isinstance(term, Arith):
        yield from term_variables(term.left)
        yield from term_variables(term.right)


def is_ground_term(term) -> bool:
    if isinstance(term, (Number, SymConst)):
        return True
    if isinstance(term, Function):
        return all(is_ground_term(a) for a in term.args)
    return False


# --- atoms, literals, rules -----------------------------------------------


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple = ()

    @property
    def signature(self) -> tuple[str, int]:
        return (self.predicate, len(self.args))

    @property
    def is_ground(self) -> bool:
        return all(is_ground_term(a) for a in self.args)

    def variables(self) -> Iterator[str]:
        for arg in self.args:
            yield from term_variables(arg)

    def render(self, sep: str = ",") -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({sep.join(map(str, self.args))})"

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Literal:
    atom: Atom
    negated: bool = False

    def variables(self) -> Iterator[str]:
        return self.atom.variables()

    def __str__(self) -> str:
        return f"not {self.atom}" if self.negated else str(self.atom)


COMPARISON_OPS = ("=", "!=", "<", "<=", ">", ">=")


@dataclass(frozen=True)
class Comparison:
    op: str
    left: Term
    right: Term

    def variables(self) -> Iterator[str]:
        yield from term_variables(self.left)
        yield from term_variables(self.right)

    def __str__(self) -> str:
        return f"{self.left}{self.op}{self.right}"


BodyElement = Union[Literal, Comparison]


@dataclass(frozen=True)
class ChoiceElement:
    atom: Atom
    conditions: tuple = ()

    def render(self, dialect: str = "gringo") -> str:
        """``gringo`` chains conditions with ":"; ``clingo`` uses ": c1, c2"."""
        if dialect == "clingo" and self.conditions:
            return f"{self.atom} : {', '.join(map(str, self.conditions))}"
        return "".join([str(self.atom)] + [f":{c}" for c in self.conditions])

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Choice:
    elements: tuple
    lower: Optional[int] = None
    upper: Optional[int] = None

    def render(self, dialect: str = "gringo") -> str:
        inner = "{" + "; ".join(e.render(dialect) for e in self.elements) + "}"
        if self.lower is not None:
            inner = f"{self.lower} {inner}"
        if self.upper is not None:
            inner = f"{inner} {self.upper}"
        return inner

    def __str__(self) -> str:
        return self.render()


Head = Union[Atom, Choice, None]


@dataclass(frozen=True)
class Rule:
    head: Head
    body: tuple = ()
    location: Optional[Location] = field(default=None, compare=False, repr=False)

    @property
    def is_fact(self) -> bool:
        return isinstance(self.head, Atom) and not self.body

    @property
    def is_constraint(self) -> bool:
        return self.head is None

    @property
    def is_choice(self) -> bool:
        return isinstance(self.head, Choice)

    def atoms(self) -> Iterator[Atom]:
        """Every atom occurrence: head, choice elements and their conditions, body."""
        if isinstance(self.head, Atom):
            yield self.head
        elif isinstance(self.head, Choice):
            for element in self.head.elements:
                yield element.atom
                for cond in element.conditions:
                    if isinstance(cond, Literal):
                        yield cond.atom
        for lit in self.body:
            if isinstance(lit, Literal):
                yield lit.atom

    def render(self, dialect: str = "gringo") -> str:
        """Source text of the rule; see :meth:`ChoiceElement.render` for dialects."""
        if self.head is None:
            head = ""
        elif isinstance(self.head, Choice):
            head = self.head.render(dialect)
        else:
            head = str(self.head)
        if not self.body:
            return f"{head}."
        body = ", ".join(map(str, self.body))
        return f"{head} :- {body}." if head else f":- {body}."

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Program:
    rules: tuple = ()

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __add__(self, other: "Program") -> "Program":
        return Program(self.rules + tuple(other.rules))

    def render(self, dialect: str = "gringo") -> str:
        return "\n".join(rule.render(dialect) for rule in self.rules)

    def __str__(self) -> str:
        return self.render()

    @classmethod
    def concat(cls, programs: Iterable["Program"]) -> "Program":
        rules: list[Rule] = []
        for p in programs:
            rules.extend(p.rules)
        return cls(tuple(rules))

    def predicates(self) -> set[tuple[str, int]]:
        return {atom.signature for rule in self.rules for atom in rule.atoms()}


@dataclass(frozen=True)
class GroundProgram:
    """Variable-free program; choice bounds are always explicit."""

    rules: tuple = ()

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __str__(self) -> str:
        return "\n".join(map(str, self.rules))

    def head_atoms(self) -> set[Atom]:
        heads: set[Atom] = set()
        for rule in self.rules:
            if isinstance(rule.head, Atom):
                heads.add(rule.head)
            elif isinstance(rule.head, Choice):
                heads.update(e.atom for e in rule.head.elements)
        return heads


# --- answer sets -----------------------------------------------------------


def atom_key(atom: Atom) -> tuple:
    """Canonical atom order: predicate, arity, then argument text."""
    return (atom.predicate, len(atom.args), tuple(str(a) for a in atom.args))


class AnswerSet(frozenset):
    """An immutable set of ground atoms."""

    def sorted(self) -> list[Atom]:
        return sorted(self, key=atom_key)

    def canonical_key(self) -> tuple:
        # Colex order: compare the atom keys from the largest down.
        return tuple(sorted((atom_key(a) for a in self), reverse=True))

    def __repr__(self) -> str:
        return "AnswerSet({" + ", ".join(map(str, self.sorted())) + "})"

    __str__ = __repr__


def canonical_order(models: Iterable[AnswerSet]) -> list[AnswerSet]:
    return sorted(models, key=AnswerSet.canonical_key)
