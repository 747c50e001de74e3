import random
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lana.asp import (
    SEARCH_LIMIT,
    AnswerSet,
    Atom,
    Choice,
    Literal,
    cautious_consequences,
    count_models_where,
    ground,
    is_stable_model,
    parse_asp,
    parse_atom,
    parse_atoms,
    stable_models,
)
from lana.errors import (
    ArithmeticTypeError,
    AspSyntaxError,
    EmptyModelList,
    SafetyError,
    SearchLimitExceeded,
)

from oracle import brute_force_models, random_program, to_text


def models_of(text, cap=None):
    return stable_models(ground(parse_asp(text)), cap)


def atoms(*texts):
    return AnswerSet(parse_atom(t) for t in texts)


# --- parse_asp ---------------------------------------------------------------


def test_parse_smallest_program():
    program = parse_asp("p.")
    assert len(program) == 1
    assert program.rules[0].is_fact
    assert program.rules[0].head == Atom("p")


def test_parse_naf_rule():
    (rule,) = parse_asp("a :- not b.").rules
    assert rule.head == Atom("a")
    assert rule.body == (Literal(Atom("b"), negated=True),)


def test_parse_guess_choice_rule():
    (rule,) = parse_asp("{ship(X1,Y1,X2,Y2):r(X1):c(Y1):r(X2):c(Y2):X2>=X1:Y2>=Y1}.").rules
    assert isinstance(rule.head, Choice)
    assert rule.head.lower is None and rule.head.upper is None
    (element,) = rule.head.elements
    assert len(element.conditions) == 6


def test_parse_keeps_rule_positions():
    program = parse_asp("p.\n  q :- p.", file="f.lp")
    assert [(r.location.line, r.location.column) for r in program] == [(1, 1), (2, 3)]
    assert program.rules[1].location.file == "f.lp"


def test_parse_ignores_comments():
    program = parse_asp("% line\np. %* block\n comment *% q.\n%** annotation *%\nr.")
    assert [str(r) for r in program] == ["p.", "q.", "r."]


@pytest.mark.parametrize("text", ["p :- .q", "p(", "p :- q", "{a} X.", "a | b."])
def test_parse_syntax_errors_carry_position(text):
    with pytest.raises(AspSyntaxError) as info:
        parse_asp(text)
    assert info.value.location is not None


def test_parse_unsafe_variable_is_named():
    with pytest.raises(SafetyError) as info:
        parse_asp("p(X) :- not q(X).")
    assert info.value.variable == "X"


def test_parse_assignment_makes_variable_safe():
    parse_asp("ov :- ship(X1,Y1,X2,Y2), L=X2-X1, L>4.")
    with pytest.raises(SafetyError):
        parse_asp("p(X) :- q(Y), X>Y.")


def test_element_local_variables_need_a_condition():
    parse_asp("{p(X) : q(X)}.")
    with pytest.raises(SafetyError):
        parse_asp("{p(X)}.")


def test_choice_separators_and_bounds():
    a = parse_asp("1 {a; b} 1.").rules[0].head
    b = parse_asp("1 {a, b} 1.").rules[0].head
    assert a == b and (a.lower, a.upper) == (1, 1)
    c = parse_asp("{a; b} = 1.").rules[0].head
    assert (c.lower, c.upper) == (1, 1)


@pytest.mark.parametrize(
    "text",
    ["p.", "a :- not b.", ":- a, not b.", "p(1..3).", "{p(X):q(X):X!=2} 2 :- r.", "q(X+1) :- p(X)."],
)
def test_rule_rendering_round_trips(text):
    program = parse_asp(text)
    assert parse_asp(str(program)) == program


def test_parse_atoms_normalizes_spacing_and_quotes():
    assert parse_atoms("ship(1, 1, 1, 2) a") == parse_atoms("ship(1,1,1,2), a")
    assert parse_atom('p("x")') == parse_atom("p(x)")


# --- ground ---------------------------------------------------------------------


def test_ground_interval_facts():
    gp = ground(parse_asp("p(1..3)."))
    assert [str(r) for r in gp] == ["p(1).", "p(2).", "p(3)."]


def test_ground_normal_rule():
    gp = ground(parse_asp("r(1..2). q(X) :- r(X)."))
    assert [str(r) for r in gp] == ["r(1).", "r(2).", "q(1) :- r(1).", "q(2) :- r(2)."]


def test_ground_choice_elements_filtered_by_comparison():
    # hand enumeration: (1,1) (1,2) (2,2) satisfy Y>=X, (2,1) does not
    gp = ground(parse_asp("r(1..2). {s(X,Y):r(X):r(Y):Y>=X}."))
    (choice,) = [r for r in gp if r.is_choice]
    assert [str(e.atom) for e in choice.head.elements] == ["s(1,1)", "s(1,2)", "s(2,2)"]
    assert all(e.conditions == () for e in choice.head.elements)
    assert (choice.head.lower, choice.head.upper) == (0, 3)


def test_ground_drops_false_comparisons_and_evaluates_arithmetic():
    gp = ground(parse_asp("p(1..3). q(Y) :- p(X), Y=X+1, Y<4."))
    assert [str(r) for r in gp if r.body] == ["q(2) :- p(1).", "q(3) :- p(2)."]


def test_ground_negation_over_underivable_atom_is_true():
    gp = ground(parse_asp("a :- not b."))
    assert [str(r) for r in gp] == ["a."]


def test_ground_program_is_variable_free():
    gp = ground(parse_asp("n(1..3). e(X,Y) :- n(X), n(Y), X<Y. {c(X):n(X)} 1. :- c(X), not e(X,3)."))
    text = str(gp)
    assert not re.search(r"[A-Z]", text)
    assert ".." not in text and "<" not in text


def test_ground_arithmetic_on_symbols_is_an_error():
    with pytest.raises(ArithmeticTypeError):
        ground(parse_asp("p(a). q(Y) :- p(X), Y=X+1."))
    with pytest.raises(ArithmeticTypeError):
        ground(parse_asp("p(a). q :- p(X), X>1."))
    # equality between a symbol and a number is just false
    assert len(ground(parse_asp("p(a). q :- p(X), X=1."))) == 1


# --- stable_models / is_stable_model ------------------------------------------------


def test_even_loop_has_two_models():
    assert models_of("a :- not b. b :- not a.") == [atoms("a"), atoms("b")]


def test_odd_loop_has_no_model():
    assert models_of("a :- not a.") == []


def test_exactly_one_choice():
    assert models_of("1 {a; b} 1.") == [atoms("a"), atoms("b")]


def test_choice_with_conditions_and_body():
    models = models_of("d(1..2). {p(X) : d(X)} :- go. go.")
    assert len(models) == 4
    assert all(atoms("go", "d(1)", "d(2)") <= m for m in models)


def test_cap_returns_canonical_prefix():
    full = models_of("{a; b; c}.")
    assert len(full) == 8
    assert models_of("{a; b; c}.", cap=3) == full[:3]


def test_is_stable_model_examples():
    assert is_stable_model(ground(parse_asp("p.")), atoms("p"))
    assert not is_stable_model(ground(parse_asp("p.")), atoms())
    # reduct w.r.t. {a,b} is empty, its least model {} differs
    assert not is_stable_model(ground(parse_asp("a :- not b. b :- not a.")), atoms("a", "b"))


def test_is_stable_model_rejects_non_head_atoms():
    assert not is_stable_model(ground(parse_asp("p.")), atoms("p", "q"))


def test_search_limit():
    text = "{" + "; ".join(f"a{i}" for i in range(SEARCH_LIMIT + 1)) + "}."
    with pytest.raises(SearchLimitExceeded):
        models_of(text)


def test_definite_programs_are_not_searched():
    models = models_of("n(1..1000). p(X) :- n(X).")
    assert len(models) == 1 and len(models[0]) == 2000


def test_inconsistent_definite_program():
    assert models_of("p. :- p.") == []


# --- cautious_consequences / count_models_where ------------------------------------


def test_cautious_consequences():
    assert cautious_consequences([atoms("a", "b"), atoms("a", "c")]) == atoms("a")
    assert cautious_consequences([atoms("a")]) == atoms("a")
    assert cautious_consequences([atoms(), atoms("a")]) == atoms()
    with pytest.raises(EmptyModelList):
        cautious_consequences([])


def test_count_models_where():
    models = [atoms("a"), atoms("b")]
    a = Atom("a")
    assert count_models_where(models, a, True) == 1
    assert count_models_where(models, a, False) == 1
    assert count_models_where([], a, True) == 0


# --- properties ------------------------------------------------------------------------


def test_enumeration_matches_brute_force_oracle():
    rng = random.Random(20240611)
    for _ in range(250):
        rules = random_program(rng)
        expected = brute_force_models(rules)
        got = models_of(to_text(rules))
        assert {frozenset(map(str, m)) for m in got} == {frozenset(m) for m in expected}
        assert len(got) == len(set(got))


@st.composite
def choice_programs(draw):
    n = draw(st.integers(1, 6))
    names = [f"p{i}" for i in range(n)]
    lines = []
    for _ in range(draw(st.integers(1, 5))):
        kind = draw(st.sampled_from(["choice", "rule", "constraint", "fact"]))
        body = draw(st.lists(st.tuples(st.sampled_from(names), st.booleans()), max_size=2))
        body_text = ", ".join(("not " if neg else "") + a for a, neg in body)
        tail = f" :- {body_text}." if body_text else "."
        if kind == "choice":
            elems = draw(st.lists(st.sampled_from(names), min_size=1, max_size=3, unique=True))
            lo = draw(st.integers(0, len(elems)))
            hi = draw(st.integers(lo, len(elems)))
            lines.append(f"{lo} {{{'; '.join(elems)}}} {hi}{tail}")
        elif kind == "rule":
            lines.append(draw(st.sampled_from(names)) + tail)
        elif kind == "constraint" and body_text:
            lines.append(f":- {body_text}.")
        elif kind == "fact":
            lines.append(draw(st.sampled_from(names)) + ".")
    return "\n".join(lines) or "p0."


@settings(max_examples=150, deadline=None)
@given(choice_programs())
def test_models_pass_reduct_check_and_cover_all_candidates(text):
    gp = ground(parse_asp(text))
    models = stable_models(gp)
    heads = sorted(gp.head_atoms(), key=str)
    brute = set()
    for mask in range(1 << len(heads)):
        candidate = AnswerSet(a for i, a in enumerate(heads) if mask >> i & 1)
        if is_stable_model(gp, candidate):
            brute.add(candidate)
    assert set(models) == brute
    assert models == stable_models(gp)


def test_choice_free_models_form_an_antichain():
    rng = random.Random(7)
    for _ in range(100):
        models = models_of(to_text(random_program(rng)))
        for m in models:
            assert not any(m < other for other in models)


def test_variable_renaming_does_not_change_models():
    a = "n(1..3). {s(X,Y) : n(X) : n(Y) : Y>X} 2. p(X) :- s(X,Y). :- p(X), not s(X,3)."
    b = a.replace("X", "Foo").replace("Y", "Bar")
    assert models_of(a) == models_of(b)

