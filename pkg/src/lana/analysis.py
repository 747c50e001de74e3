"""Semantic checks over an annotated program.

All checks are opt-in through declarations: a program without ``@atom``
or ``@term`` annotations never produces diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .asp.grounding import AtomIndex, expand_intervals, ground, match_body
from .asp.solving import stable_models
from .errors import (
    ArithmeticTypeError,
    CircularSameRangeAs,
    LanaError,
    TypeEvaluationError,
    UnknownTerm,
)
from .model import (
    AnnotatedProgram,
    AtomDecl,
    Block,
    Diagnostic,
    FromList,
    SameRangeAs,
    Signature,
    TermDecl,
    WithBody,
    atom_signature,
    effective_declarations,
    hidden_atoms,
)


# --- resolved types ----------------------------------------------------------------


@dataclass(frozen=True)
class Extensional:
    members: frozenset

    def accepts(self, term) -> bool:
        return term in self.members


@dataclass
class Predicate:
    """Membership by a rule body over ``#V``, cautiously over the embedded code."""

    spec: WithBody
    _indexes: Optional[list] = field(default=None, repr=False, compare=False)

    def _models(self) -> list:
        if self._indexes is None:
            models = stable_models(ground(self.spec.code))
            if not models:
                raise TypeEvaluationError("the code of the @with type has no answer set")
            self._indexes = [(AtomIndex(m), m) for m in models]
        return self._indexes

    def accepts(self, term) -> bool:
        for index, model in self._models():
            try:
                holds = next(match_body(self.spec.body, index, {"#V": term}, lambda a: a not in model), None)
            except ArithmeticTypeError:
                return False
            if holds is None:
                return False
        return True


@dataclass(frozen=True)
class Unconstrained:
    def accepts(self, term) -> bool:
        return True


ResolvedType = Union[Extensional, Predicate, Unconstrained]


def _term_table(block: Block) -> dict:
    _, terms = effective_declarations(block)
    return {name: decl for decl in terms for name in decl.names}


def resolve_type(term_name: str, block: Block) -> ResolvedType:
    """The type of ``term_name`` as seen from ``block``."""
    table = _term_table(block)
    seen: list[str] = []
    name = term_name
    while True:
        decl: Optional[TermDecl] = table.get(name)
        if decl is None:
            where = f" (referenced from {seen[-1]})" if seen else ""
            raise UnknownTerm(f"unknown term {name}{where}")
        if name in seen:
            cycle = seen[seen.index(name) :] + [name]
            raise CircularSameRangeAs(cycle, decl.location)
        seen.append(name)
        spec = decl.type_spec
        if isinstance(spec, SameRangeAs):
            name = spec.term_name
            continue
        if isinstance(spec, FromList):
            return Extensional(frozenset(spec.terms))
        if isinstance(spec, WithBody):
            return Predicate(spec)
        return Unconstrained()


# --- signature checks -------------------------------------------------------------


def _first_locations(rules) -> dict:
    """First rule location per predicate signature."""
    found: dict = {}
    for rule in rules:
        for atom in rule.atoms():
            found.setdefault(atom_signature(atom), rule.location)
    return found


def _all_atom_decls(ap: AnnotatedProgram) -> list[tuple[AtomDecl, Block]]:
    return [(d, b) for b in ap.blocks() for d in b.atom_decls]


def check_signatures(ap: AnnotatedProgram) -> list[Diagnostic]:
    """Undeclared predicates, arity mismatches, undeclared signature entries, hidden atoms."""
    program_decls = _all_atom_decls(ap)
    out: list[Diagnostic] = []
    for block in ap.blocks():
        atoms, _ = effective_declarations(block)
        declared = {d.signature for d in atoms}
        names = {d.predicate for d in atoms}
        for sig, loc in _first_locations(block.rules).items():
            if sig in declared:
                continue
            if sig.predicate in names:
                arities = sorted({d.signature.arity for d in atoms if d.predicate == sig.predicate})
            else:
                arities = sorted({d.signature.arity for d, _ in program_decls if d.predicate == sig.predicate})
            if arities and sig.arity not in arities:
                shown = ", ".join(str(a) for a in arities)
                out.append(
                    Diagnostic(
                        "error",
                        "ArityMismatch",
                        f"{sig.predicate} used with arity {sig.arity}, declared with arity {shown}",
                        loc,
                    )
                )
            elif block.atom_decls:
                out.append(
                    Diagnostic("warning", "UndeclaredPredicate", f"predicate {sig} has no @atom declaration", loc)
                )
        for kind, sigs in (("input", block.input_sig), ("output", block.output_sig)):
            for sig in sigs:
                if sig not in declared:
                    out.append(
                        Diagnostic(
                            "warning",
                            "SignatureNotDeclared",
                            f"{kind} signature entry {sig} of block {block.name} has no @atom declaration",
                            block.location,
                        )
                    )
        hidden_locs = _first_locations(block.rules)
        for sig in hidden_atoms(block):
            out.append(
                Diagnostic("info", "HiddenAtom", f"{sig} is hidden in block {block.name}", hidden_locs[sig])
            )
    return sorted(out, key=Diagnostic.sort_key)


# --- type checks ------------------------------------------------------------------


def _term_diagnostics(ap: AnnotatedProgram) -> list[Diagnostic]:
    out = []
    cycles: set = set()
    for block in ap.blocks():
        for decl in block.term_decls:
            for name in decl.names:
                try:
                    resolved = resolve_type(name, block)
                    if isinstance(resolved, Predicate):
                        resolved._models()
                except CircularSameRangeAs as exc:
                    members = frozenset(exc.cycle)
                    if members not in cycles:
                        cycles.add(members)
                        out.append(Diagnostic("error", exc.code, exc.message, decl.location))
                    break
                except LanaError as exc:
                    out.append(Diagnostic("error", exc.code, f"term {name}: {exc.message}", decl.location))
                    break
    return out


def _decl_for(sig: Signature, block: Block, program_decls) -> Optional[tuple[AtomDecl, Block]]:
    """The declaration governing ``sig`` in ``block``, with the block its terms resolve in."""
    atoms, _ = effective_declarations(block)
    for decl in reversed(atoms):
        if decl.signature == sig:
            return decl, block
    for decl, owner in program_decls:
        if decl.signature == sig:
            return decl, owner
    return None


def check_types(ap: AnnotatedProgram) -> list[Diagnostic]:
    """Check the arguments of ground facts against their declared term types."""
    out = _term_diagnostics(ap)
    program_decls = _all_atom_decls(ap)
    cache: dict = {}

    def type_of(name: str, block: Block):
        key = (name, id(block))
        if key not in cache:
            try:
                cache[key] = resolve_type(name, block)
            except LanaError:
                cache[key] = Unconstrained()
        return cache[key]

    for block in ap.blocks():
        for rule in block.rules:
            if not rule.is_fact:
                continue
            for fact in expand_intervals(rule):
                atom = fact.head
                if not atom.is_ground:
                    continue
                found = _decl_for(atom_signature(atom), block, program_decls)
                if found is None:
                    continue
                decl, context = found
                for pos, (name, value) in enumerate(zip(decl.term_names, atom.args), 1):
                    try:
                        ok = type_of(name, context).accepts(value)
                    except LanaError:
                        ok = True
                    if not ok:
                        out.append(
                            Diagnostic(
                                "error",
                                "TypeViolation",
                                f"{atom.predicate} argument {pos}: {value} is not of type {name}",
                                rule.location,
                            )
                        )
    return sorted(out, key=Diagnostic.sort_key)


def lint(ap: AnnotatedProgram) -> list[Diagnostic]:
    return sorted(check_signatures(ap) + check_types(ap), key=Diagnostic.sort_key)


def format_diagnostics(diagnostics) -> str:
    """One ``severity code file:line:col message`` line per diagnostic."""
    return "".join(f"{d}\n" for d in sorted(diagnostics, key=Diagnostic.sort_key))
