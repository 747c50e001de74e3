from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lana.analysis import (
    Extensional,
    Predicate,
    Unconstrained,
    check_signatures,
    check_types,
    format_diagnostics,
    lint,
    resolve_type,
)
from lana.annotations import parse_source
from lana.asp import Number, SymConst
from lana.errors import CircularSameRangeAs, TypeEvaluationError, UnknownTerm
from lana.model import find_block

FIXTURES = Path(__file__).parent / "fixtures"
BATTLESHIP = (FIXTURES / "battleship.lp").read_text()
# anchors for mutations: just inside the Battleship block, and inside Guess
IN_BATTLESHIP = "%**\n @precon Excl"
IN_GUESS = "{ship(X1,Y1,X2,Y2)"


def mutate(anchor, rule):
    assert anchor in BATTLESHIP
    text = BATTLESHIP.replace(anchor, f"{rule}\n{anchor}", 1)
    line = text[: text.index(rule)].count("\n") + 1
    ap, diags = parse_source(text, "battleship.lp")
    assert diags == []
    return ap, line


def codes(diags):
    return [(d.code, d.location.line if d.location else None) for d in diags]


@pytest.fixture(scope="module")
def battleship():
    return parse_source(BATTLESHIP, "battleship.lp")[0]


def test_clean_fixture_has_no_diagnostics(battleship):
    assert lint(battleship) == []


def test_full_fixture_with_test_cases_lints_clean():
    ap, _ = parse_source((FIXTURES / "battleship_full.lp").read_text(), "battleship_full.lp")
    assert lint(ap) == []


def test_undeclared_predicate():
    ap, line = mutate(IN_BATTLESHIP, "shp(1,1).")
    diags = check_signatures(ap)
    # same position, so ordered by code
    assert codes(diags) == [("HiddenAtom", line), ("UndeclaredPredicate", line)]
    assert "shp/2" in diags[1].message


def test_undeclared_predicate_needs_local_declarations():
    # Guess declares no @atom of its own, so its r/1 and c/1 stay quiet
    ap, _ = mutate(IN_GUESS, "shp(1,1).")
    assert check_signatures(ap) == []


def test_arity_mismatch():
    ap, line = mutate(IN_GUESS, "water(1,1,1).")
    (d,) = check_signatures(ap)
    assert (d.severity, d.code, d.location.line, d.location.column) == ("error", "ArityMismatch", line, 1)
    assert "arity 3" in d.message and "arity 2" in d.message


def test_arity_mismatch_outside_the_declaring_block():
    ap, _ = parse_source(BATTLESHIP + "water(1,1,1).\n", "battleship.lp")
    assert [d.code for d in check_signatures(ap)] == ["ArityMismatch"]


def test_overloaded_predicate_is_not_a_mismatch():
    ap, _ = mutate(IN_GUESS, "ship(1,1). ship(1,1,1,1).")
    assert check_signatures(ap) == []


def test_signature_not_declared():
    ap, _ = parse_source("%** @block A { @atom p(X) @input p/1, q/2 } *%")
    (d,) = check_signatures(ap)
    assert d.code == "SignatureNotDeclared" and "q/2" in d.message


def test_hidden_atom_info():
    ap, line = mutate(IN_BATTLESHIP, "occupied(X,Y) :- ship(X,Y).")
    diags = [d for d in check_signatures(ap) if d.code == "HiddenAtom"]
    assert codes(diags) == [("HiddenAtom", line)]
    assert diags[0].severity == "info"


def test_unannotated_program_is_silent():
    ap, _ = parse_source("r(1..3). {s(X) : r(X)}. :- s(1), s(2). p(a,b). p(a).", "plain.lp")
    assert lint(ap) == []


# --- resolve_type --------------------------------------------------------------------


def test_resolve_from_list(battleship):
    guess = find_block(battleship, "Guess")
    x = resolve_type("X", guess)
    assert x == Extensional(frozenset(Number(i) for i in range(1, 11)))
    assert resolve_type("X1", guess) == x
    assert resolve_type("Y2", find_block(battleship, "Battleship")) == x


def test_resolve_unknown_term(battleship):
    with pytest.raises(UnknownTerm):
        resolve_type("H", find_block(battleship, "Battleship"))


def test_resolve_untyped_term_is_unconstrained():
    ap, _ = parse_source("%** @term Z an untyped term *%")
    assert resolve_type("Z", ap.root) == Unconstrained()


def test_circular_samerangeas():
    ap, _ = parse_source("%** @term A @samerangeas B\n @term B @samerangeas A *%")
    with pytest.raises(CircularSameRangeAs):
        resolve_type("A", ap.root)


def test_with_type():
    ap, _ = parse_source("%** @term X @with integer(#V), #V > 2\n integer(1..5). *%")
    t = resolve_type("X", ap.root)
    assert isinstance(t, Predicate)
    assert [i for i in range(0, 8) if t.accepts(Number(i))] == [3, 4, 5]
    assert not t.accepts(SymConst("a"))


def test_with_type_is_cautious():
    ap, _ = parse_source("%** @term X @with d(#V)\n d(1). d(2) :- not e. e :- not d(2). *%")
    t = resolve_type("X", ap.root)
    assert t.accepts(Number(1)) and not t.accepts(Number(2))


def test_with_type_without_models():
    ap, _ = parse_source("%** @term X @with d(#V)\n d(1). :- d(1). *%")
    with pytest.raises(TypeEvaluationError):
        resolve_type("X", ap.root).accepts(Number(1))


terms = st.one_of(st.integers(-3, 12).map(Number), st.sampled_from(["a", "b", "c"]).map(SymConst))


@settings(max_examples=60, deadline=None)
@given(st.lists(terms, min_size=1, max_size=6), st.lists(terms, min_size=1, max_size=8))
def test_from_list_and_with_agree(members, probes):
    listed = ", ".join(map(str, members))
    facts = " ".join(f"dom({t})." for t in members)
    ap, _ = parse_source(f"%** @term A @from {listed}\n @term B @with dom(#V)\n {facts} *%")
    a = resolve_type("A", ap.root)
    b = resolve_type("B", ap.root)
    for t in probes + members:
        assert a.accepts(t) == b.accepts(t)


# --- check_types -------------------------------------------------------------------


def test_type_violation():
    ap, line = mutate(IN_GUESS, "rowHint(11,3).")
    (d,) = check_types(ap)
    assert (d.code, d.location.line, d.location.column) == ("TypeViolation", line, 1)
    assert d.message.startswith("rowHint argument 1: 11 ")


def test_type_violation_for_instance_facts_outside_blocks():
    ap, _ = parse_source(BATTLESHIP + "rowHint(1,3). rowHint(0,3). ship(1,1,1,12).\n", "battleship.lp")
    assert [d.message.split(":")[0] for d in check_types(ap)] == ["rowHint argument 1", "ship argument 4"]


def test_well_typed_fact_and_unconstrained_position():
    ap, _ = mutate(IN_GUESS, "rowHint(1,3). rowHint(1,300).")
    assert check_types(ap) == []


def test_non_facts_are_not_checked():
    ap, _ = mutate(IN_GUESS, "rowHint(11,3) :- r(1).")
    assert check_types(ap) == []


def test_interval_facts_are_expanded():
    ap, _ = mutate(IN_GUESS, "water(1,9..11).")
    assert [d.message.split(":")[1].split()[0] for d in check_types(ap)] == ["11"]


def test_circular_pair_is_reported_once():
    ap, _ = parse_source("%** @term A @samerangeas B\n @term B @samerangeas A *%", "c.lp")
    (d,) = check_types(ap)
    assert (d.code, d.location.line) == ("CircularSameRangeAs", 1)


def test_dangling_samerangeas_is_reported():
    ap, _ = parse_source("%** @term A @samerangeas Nope *%", "c.lp")
    assert [d.code for d in check_types(ap)] == ["UnknownTerm"]


def test_checks_are_idempotent_and_pure(battleship):
    ap, _ = mutate(IN_GUESS, "water(1,1,1). rowHint(11,3).")
    first = lint(ap)
    assert lint(ap) == first
    assert len(first) == 2


def test_format_diagnostics():
    ap, line = mutate(IN_GUESS, "rowHint(11,3).")
    text = format_diagnostics(check_types(ap))
    assert text.startswith(f"error TypeViolation battleship.lp:{line}:1 rowHint argument 1")
    assert text.endswith("\n") and text.count("\n") == 1
