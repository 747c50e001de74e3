"""A small bottom-up grounder.

The grounder works in three passes over the interval-expanded rules:

1. *possible* atoms: least fixpoint of all rules, ignoring negation and
   treating choice elements as derivable;
2. *certain* atoms: least fixpoint of the definite rules only;
3. instantiation of every rule over the possible atoms.

Negative literals over impossible atoms are dropped as true, rule
instances with a false literal disappear, and choice-element conditions
that hold in every model are removed.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import product
from typing import Iterable, Iterator, Optional

from ..errors import ArithmeticTypeError
from .syntax import (
    Arith,
    Atom,
    Choice,
    ChoiceElement,
    Comparison,
    Function,
    GroundProgram,
    Interval,
    Literal,
    Number,
    Program,
    Rule,
    SymConst,
    Variable,
    term_variables,
)

Subst = dict


# --- interval expansion ----------------------------------------------------


def _expand_term(term) -> list:
    if isinstance(term, Interval):
        return [Number(v) for v in range(term.lo, term.hi + 1)]
    if isinstance(term, Function):
        return [Function(term.name, args) for args in product(*map(_expand_term, term.args))]
    if isinstance(term, Arith):
        return [
            Arith(term.op, left, right)
            for left, right in product(_expand_term(term.left), _expand_term(term.right))
        ]
    return [term]


def _expand_atom(atom: Atom) -> list[Atom]:
    return [Atom(atom.predicate, args) for args in product(*map(_expand_term, atom.args))]


def _expand_body_element(el) -> list:
    if isinstance(el, Literal):
        return [Literal(a, el.negated) for a in _expand_atom(el.atom)]
    return [
        Comparison(el.op, left, right)
        for left, right in product(_expand_term(el.left), _expand_term(el.right))
    ]


def expand_intervals(rule: Rule) -> list[Rule]:
    """Replace intervals by their members, one rule (or element) per member."""
    bodies = [tuple(b) for b in product(*map(_expand_body_element, rule.body))]
    if isinstance(rule.head, Atom):
        heads = _expand_atom(rule.head)
    elif isinstance(rule.head, Choice):
        elements = []
        for element in rule.head.elements:
            for atom in _expand_atom(element.atom):
                for conds in product(*map(_expand_body_element, element.conditions)):
                    elements.append(ChoiceElement(atom, tuple(conds)))
        heads = [Choice(tuple(elements), rule.head.lower, rule.head.upper)]
    else:
        heads = [None]
    return [Rule(h, b, rule.location) for h in heads for b in bodies]


# --- term evaluation and matching -------------------------------------------


def evaluate(term, subst: Subst):
    """Ground ``term`` under ``subst``, computing arithmetic."""
    if isinstance(term, Variable):
        return subst[term.name]
    if isinstance(term, (Number, SymConst)):
        return term
    if isinstance(term, Function):
        return Function(term.name, tuple(evaluate(a, subst) for a in term.args))
    if isinstance(term, Arith):
        left = evaluate(term.left, subst)
        right = evaluate(term.right, subst)
        if not (isinstance(left, Number) and isinstance(right, Number)):
            raise ArithmeticTypeError(f"arithmetic over non-integer terms in {term}")
        value = left.value + right.value if term.op == "+" else left.value - right.value
        return Number(value)
    raise TypeError(f"cannot evaluate {term!r}")


def ground_atom(atom: Atom, subst: Subst) -> Atom:
    return Atom(atom.predicate, tuple(evaluate(a, subst) for a in atom.args))


def compare(op: str, left, right) -> bool:
    if op == "=":
        return left == right
    if op == "!=":
        return left != right
    if not (isinstance(left, Number) and isinstance(right, Number)):
        raise ArithmeticTypeError(f"ordering comparison {left}{op}{right} on symbolic constants")
    a, b = left.value, right.value
    return {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[op]


def _arith_vars(term) -> Iterator[str]:
    if isinstance(term, Arith):
        yield from term_variables(term)
    elif isinstance(term, Function):
        for arg in term.args:
            yield from _arith_vars(arg)


def _unify(pattern, value, subst: Subst) -> Optional[Subst]:
    if isinstance(pattern, Variable):
        bound = subst.get(pattern.name)
        if bound is None:
            new = dict(subst)
            new[pattern.name] = value
            return new
        return subst if bound == value else None
    if isinstance(pattern, Function):
        if not isinstance(value, Function) or value.name != pattern.name:
            return None
        if len(value.args) != len(pattern.args):
            return None
        for p, v in zip(pattern.args, value.args):
            subst = _unify(p, v, subst)
            if subst is None:
                return None
        return subst
    if isinstance(pattern, Arith):
        return subst if evaluate(pattern, subst) == value else None
    return subst if pattern == value else None


def match_atom(pattern: Atom, atom: Atom, subst: Subst) -> Optional[Subst]:
    if pattern.signature != atom.signature:
        return None
    for p, v in zip(pattern.args, atom.args):
        subst = _unify(p, v, subst)
        if subst is None:
            return None
    return subst


class AtomIndex:
    """Ground atoms grouped by signature, in insertion order."""

    def __init__(self, atoms: Iterable[Atom] = ()):
        self._by_sig: dict = defaultdict(dict)
        for a in atoms:
            self.add(a)

    def add(self, atom: Atom) -> bool:
        bucket = self._by_sig[atom.signature]
        if atom in bucket:
            return False
        bucket[atom] = None
        return True

    def __contains__(self, atom: Atom) -> bool:
        return atom in self._by_sig.get(atom.signature, ())

    def candidates(self, sig) -> list[Atom]:
        return list(self._by_sig.get(sig, ()))

    def __iter__(self):
        for bucket in self._by_sig.values():
            yield from bucket


def _ready(el, subst: Subst) -> int:
    """Scheduling priority of body element ``el`` (lower first), -1 if not ready."""
    if isinstance(el, Comparison):
        free = {v for v in el.variables() if v not in subst}
        if not free:
            return 0
        if el.op == "=":
            for target, source in ((el.left, el.right), (el.right, el.left)):
                if (
                    isinstance(target, Variable)
                    and target.name in free
                    and not any(v not in subst for v in term_variables(source))
                ):
                    return 1
        return -1
    if el.negated:
        return 0 if all(v in subst for v in el.variables()) else -1
    if any(v not in subst for arg in el.atom.args for v in _arith_vars(arg)):
        return -1
    unbound = len({v for v in el.variables() if v not in subst})
    return 2 + unbound


def match_body(
    body, index: AtomIndex, subst: Optional[Subst] = None, negative=None
) -> Iterator[Subst]:
    """Yield substitutions satisfying ``body`` against ``index``.

    Positive literals must match atoms of ``index``; comparisons are
    evaluated once their variables are bound.  ``negative`` decides ground
    negative literals: a callable ``atom -> bool`` (True means satisfied);
    by default they are treated as satisfied.
    """
    subst = {} if subst is None else subst
    pending = list(body)
    if not pending:
        yield subst
        return
    ranked = [(_ready(el, subst), i) for i, el in enumerate(pending)]
    ranked = [(r, i) for r, i in ranked if r >= 0]
    if not ranked:
        raise ValueError(f"cannot schedule body {', '.join(map(str, body))}")
    _, i = min(ranked)
    el = pending.pop(i)
    if isinstance(el, Comparison):
        free = {v for v in el.variables() if v not in subst}
        if not free:
            if compare(el.op, evaluate(el.left, subst), evaluate(el.right, subst)):
                yield from match_body(pending, index, subst, negative)
            return
        for target, source in ((el.left, el.right), (el.right, el.left)):
            if isinstance(target, Variable) and target.name in free:
                new = dict(subst)
                new[target.name] = evaluate(source, subst)
                yield from match_body(pending, index, new, negative)
                return
    elif el.negated:
        if negative is None or negative(ground_atom(el.atom, subst)):
            yield from match_body(pending, index, subst, negative)
    else:
        for atom in index.candidates(el.atom.signature):
            new = match_atom(el.atom, atom, subst)
            if new is not None:
                yield from match_body(pending, index, new, negative)


# --- the grounder ------------------------------------------------------------


def _fixpoint(rules: list[Rule], definite_only: bool) -> AtomIndex:
    index = AtomIndex()
    changed = True
    while changed:
        changed = False
        for rule in rules:
            if rule.head is None:
                continue
            if definite_only and (
                isinstance(rule.head, Choice)
                or any(isinstance(el, Literal) and el.negated for el in rule.body)
            ):
                continue
            for subst in list(match_body(rule.body, index)):
                if isinstance(rule.head, Atom):
                    changed |= index.add(ground_atom(rule.head, subst))
                    continue
                for element in rule.head.elements:
                    for local in list(match_body(element.conditions, index, subst)):
                        changed |= index.add(ground_atom(element.atom, local))
    return index


def _simplify(literals, possible, certain, subst, drop_certain=False) -> Optional[tuple]:
    """Ground and simplify literals; None when one of them is false."""
    out = []
    for el in literals:
        if isinstance(el, Comparison):
            continue
        atom = ground_atom(el.atom, subst)
        if el.negated:
            if atom in certain:
                return None
            if atom in possible:
                out.append(Literal(atom, True))
        else:
            if atom not in possible:
                return None
            if not (drop_certain and atom in certain):
                out.append(Literal(atom))
    return tuple(out)


def ground(program: Program) -> GroundProgram:
    rules = [r for rule in program for r in expand_intervals(rule)]
    possible = _fixpoint(rules, definite_only=False)
    certain = _fixpoint(rules, definite_only=True)
    out: dict = {}

    def emit(rule: Rule):
        out.setdefault(rule, None)

    for rule in rules:
        for subst in match_body(rule.body, possible):
            body = _simplify(rule.body, possible, certain, subst)
            if body is None:
                continue
            if isinstance(rule.head, Atom):
                emit(Rule(ground_atom(rule.head, subst), body, rule.location))
            elif rule.head is None:
                emit(Rule(None, body, rule.location))
            else:
                emit(_ground_choice(rule, body, subst, possible, certain))
    return GroundProgram(tuple(out))


def _ground_choice(rule, body, subst, possible, certain) -> Rule:
    elements: dict = {}
    for element in rule.head.elements:
        for local in match_body(element.conditions, possible, subst):
            conds = _simplify(element.conditions, possible, certain, local, drop_certain=True)
            if conds is not None:
                elements.setdefault(ChoiceElement(ground_atom(element.atom, local), conds), None)
    n = len({e.atom for e in elements})
    lower = max(0, rule.head.lower or 0)
    upper = n if rule.head.upper is None else min(rule.head.upper, n)
    if lower > upper:
        # bounds cannot be met: the body must be false
        return Rule(None, body, rule.location)
    return Rule(Choice(tuple(elements), lower, upper), body, rule.location)
