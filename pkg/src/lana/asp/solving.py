"""Stable-model enumeration for small ground programs.

The search guesses the truth of the atoms whose value is not fixed by the
definite part of the program (atoms under negation and choice-element
heads), computes the least model of the reduct for each guess, and keeps
guesses that reproduce themselves.  Partial guesses are pruned with a
lower and an upper bound model.  :func:`is_stable_model` is a separate,
direct reduct check used for verification.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from ..errors import EmptyModelList, SearchLimitExceeded
from .syntax import AnswerSet, Atom, Choice, GroundProgram, atom_key, canonical_order

#: Maximum number of guessed atoms the enumerator accepts.
SEARCH_LIMIT = 24


@dataclass
class _Compiled:
    atoms: list
    normal: list  # (head, pos, neg)
    constraints: list  # (pos, neg)
    choices: list  # (lower, upper, pos, neg, [(head, pos, neg)])


def _compile(gp: GroundProgram) -> _Compiled:
    atoms = sorted(gp.head_atoms(), key=atom_key)
    ids = {a: i for i, a in enumerate(atoms)}

    def split(literals):
        pos, neg = [], []
        for lit in literals:
            i = ids.get(lit.atom)
            if lit.negated:
                if i is not None:
                    neg.append(i)
            elif i is None:
                return None  # atom without any rule: body can never hold
            else:
                pos.append(i)
        return tuple(pos), tuple(neg)

    c = _Compiled(atoms, [], [], [])
    for rule in gp:
        body = split(rule.body)
        if body is None:
            continue
        if isinstance(rule.head, Atom):
            c.normal.append((ids[rule.head], *body))
        elif rule.head is None:
            c.constraints.append(body)
        elif isinstance(rule.head, Choice):
            elements = []
            for e in rule.head.elements:
                cond = split(e.conditions)
                if cond is not None:
                    elements.append((ids[e.atom], *cond))
            c.choices.append((rule.head.lower, rule.head.upper, *body, elements))
    return c


def _least_model(c: _Compiled, neg_true, chosen) -> set:
    """Least model of the reduct; ``neg_true(i)`` decides "not atom_i",
    ``chosen(i)`` whether choice head ``i`` may be derived."""
    model: set = set()
    changed = True
    while changed:
        changed = False
        for head, pos, neg in c.normal:
            if head not in model and all(p in model for p in pos) and all(map(neg_true, neg)):
                model.add(head)
                changed = True
        for _, _, pos, neg, elements in c.choices:
            if not (all(p in model for p in pos) and all(map(neg_true, neg))):
                continue
            for head, cpos, cneg in elements:
                if (
                    head not in model
                    and chosen(head)
                    and all(p in model for p in cpos)
                    and all(map(neg_true, cneg))
                ):
                    model.add(head)
                    changed = True
    return model


def _satisfies_checks(c: _Compiled, model: set) -> bool:
    holds = lambda pos, neg: all(p in model for p in pos) and not any(n in model for n in neg)
    for pos, neg in c.constraints:
        if holds(pos, neg):
            return False
    for lower, upper, pos, neg, elements in c.choices:
        if holds(pos, neg):
            count = len({h for h, cpos, cneg in elements if h in model and holds(cpos, cneg)})
            if not lower <= count <= upper:
                return False
    return True


def stable_models(gp: GroundProgram, cap: Optional[int] = None) -> list[AnswerSet]:
    """All stable models of ``gp`` in canonical order, or the first ``cap``.

    Raises :class:`SearchLimitExceeded` when more than :data:`SEARCH_LIMIT`
    atoms have to be guessed; definite programs are never searched.
    """
    if cap is not None and cap < 1:
        raise ValueError("cap must be a positive integer or None")
    c = _compile(gp)
    definite = _least_model(c, neg_true=lambda i: False, chosen=lambda i: False)
    # an atom fixed by the definite rules is true in every candidate
    guess = set()
    for _, _, neg in c.normal:
        guess.update(neg)
    for pos, neg in c.constraints:
        guess.update(neg)
    for _, _, _, neg, elements in c.choices:
        guess.update(neg)
        for head, _, cneg in elements:
            guess.add(head)
            guess.update(cneg)
    guess = sorted(guess - definite)
    if len(guess) > SEARCH_LIMIT:
        raise SearchLimitExceeded(
            f"{len(guess)} atoms to guess exceeds the internal limit of {SEARCH_LIMIT}; "
            "use an external solver"
        )

    found: list[frozenset] = []
    assignment: dict = {}

    def search(k: int):
        # lower bound: unassigned atoms are assumed true under negation, not chosen
        low = _least_model(
            c,
            neg_true=lambda i: i not in definite and assignment.get(i) is False,
            chosen=lambda i: assignment.get(i) is True,
        )
        up = _least_model(
            c,
            neg_true=lambda i: i not in definite and assignment.get(i) is not True,
            chosen=lambda i: assignment.get(i) is not False,
        )
        for i, value in assignment.items():
            if (value and i not in up) or (not value and i in low):
                return
        for pos, neg in c.constraints:
            if all(p in low for p in pos) and all(assignment.get(n) is False for n in neg):
                return
        if k == len(guess):
            if low == up and _satisfies_checks(c, low):
                found.append(frozenset(low))
            return
        for value in (False, True):
            assignment[guess[k]] = value
            search(k + 1)
        del assignment[guess[k]]

    search(0)
    models = canonical_order(AnswerSet(c.atoms[i] for i in m) for m in set(found))
    return models if cap is None else models[:cap]


def _holds(literals, model) -> bool:
    return all((lit.atom in model) != lit.negated for lit in literals)


def is_stable_model(gp: GroundProgram, candidate: Iterable[Atom]) -> bool:
    """Gelfond-Lifschitz check of ``candidate`` against ``gp``."""
    candidate = frozenset(candidate)
    if not candidate <= gp.head_atoms():
        return False
    reduct: list = []
    for rule in gp:
        if rule.head is None:
            if _holds(rule.body, candidate):
                return False
            continue
        if isinstance(rule.head, Choice):
            if _holds(rule.body, candidate):
                chosen = {
                    e.atom
                    for e in rule.head.elements
                    if e.atom in candidate and _holds(e.conditions, candidate)
                }
                if not rule.head.lower <= len(chosen) <= rule.head.upper:
                    return False
            if any(lit.negated and lit.atom in candidate for lit in rule.body):
                continue
            for e in rule.head.elements:
                if e.atom not in candidate:
                    continue
                if any(lit.negated and lit.atom in candidate for lit in e.conditions):
                    continue
                positive = [l.atom for l in rule.body + e.conditions if not l.negated]
                reduct.append((e.atom, positive))
            continue
        if any(lit.negated and lit.atom in candidate for lit in rule.body):
            continue
        reduct.append((rule.head, [l.atom for l in rule.body if not l.negated]))

    least: set = set()
    changed = True
    while changed:
        changed = False
        for head, positive in reduct:
            if head not in least and all(a in least for a in positive):
                least.add(head)
                changed = True
    return least == candidate


def cautious_consequences(models: list) -> AnswerSet:
    """Atoms true in every model."""
    if not models:
        raise EmptyModelList("cautious consequences of an empty model list are undefined here")
    return AnswerSet(frozenset.intersection(*map(frozenset, models)))


def count_models_where(models: Iterable, atom: Atom, polarity: bool) -> int:
    return sum(1 for m in models if (atom in m) == polarity)
