"""Parsing, grounding and solving of normal programs with choice rules."""

from .grounding import ground
from .parser import parse_asp, parse_atom, parse_atoms, parse_rule, parse_term
from .solving import (
    SEARCH_LIMIT,
    cautious_consequences,
    count_models_where,
    is_stable_model,
    stable_models,
)
from .syntax import (
    AnswerSet,
    Arith,
    Atom,
    Choice,
    ChoiceElement,
    Comparison,
    Function,
    GroundProgram,
    Interval,
    Literal,
    Location,
    Number,
    Program,
    Rule,
    SymConst,
    Variable,
    atom_key,
    canonical_order,
)

__all__ = [
    "SEARCH_LIMIT",
    "AnswerSet",
    "Arith",
    "Atom",
    "Choice",
    "ChoiceElement",
    "Comparison",
    "Function",
    "GroundProgram",
    "Interval",
    "Literal",
    "Location",
    "Number",
    "Program",
    "Rule",
    "SymConst",
    "Variable",
    "atom_key",
    "canonical_order",
    "cautious_consequences",
    "count_models_where",
    "ground",
    "is_stable_model",
    "parse_asp",
    "parse_atom",
    "parse_atoms",
    "parse_rule",
    "parse_term",
    "stable_models",
]
