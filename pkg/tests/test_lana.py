from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lana.annotations import (
    AnnotationText,
    RuleText,
    extract_annotations,
    parse_lana,
    parse_source,
    parse_sources,
    parse_testsuite,
    render_segments,
)
from lana.asp import Atom, parse_asp
from lana.errors import (
    DuplicateBlockName,
    GrounderRequired,
    MalformedAnnotation,
    MalformedSignatureList,
    MissingField,
    NonGroundTestAtom,
    OverlappingBlocks,
    UnknownBlock,
    UnknownSolverType,
    UnterminatedAnnotation,
)
from lana.model import (
    PROGRAM_ROOT,
    FromList,
    Mode,
    SameRangeAs,
    Signature,
    TestAtoms,
    effective_declarations,
    find_block,
    hidden_atoms,
    scope_rules,
)

FIXTURES = Path(__file__).parent / "fixtures"


def load(name):
    return parse_source((FIXTURES / name).read_text(), name)


@pytest.fixture(scope="module")
def battleship():
    ap, diagnostics = load("battleship_full.lp")
    assert diagnostics == []
    return ap


# --- extract_annotations ----------------------------------------------------------


def test_extract_block_around_rule():
    segs = extract_annotations("%** @block B { *%\np.\n%** } *%")
    assert segs == [AnnotationText("@block B {"), RuleText("p."), AnnotationText("}")]


def test_extract_drops_plain_comments():
    assert extract_annotations("% plain comment\np.") == [RuleText("p.")]
    assert extract_annotations("%* block\ncomment *% p.") == [RuleText("p.")]


def test_extract_unterminated_annotation():
    with pytest.raises(UnterminatedAnnotation) as info:
        extract_annotations("p.\n%** @atom w(X) ...")
    assert (info.value.location.line, info.value.location.column) == (2, 1)


def test_extract_keeps_rule_positions():
    segs = extract_annotations("%** @block B { *%\n  p. % c\n q.", "f.lp")
    (rule_text,) = [s for s in segs if isinstance(s, RuleText)]
    assert (rule_text.start.line, rule_text.start.column) == (2, 3)
    program = parse_asp(rule_text.content, "f.lp", rule_text.start.line, rule_text.start.column)
    assert [(r.location.line, r.location.column) for r in program] == [(2, 3), (3, 2)]


def test_percent_inside_string_is_not_a_comment():
    (seg,) = extract_annotations('p("50%").')
    assert seg.content == 'p("50%").'


# --- parse_lana on the Battleship fixture --------------------------------------------


def test_battleship_block_tree(battleship):
    root = battleship.root
    assert root.name == "battleship_full.lp"
    assert [b.name for b in root.children] == ["Battleship"]
    assert [b.name for b in root.children[0].children] == ["Guess"]


def test_battleship_signatures(battleship):
    b = find_block(battleship, "Battleship")
    assert b.input_sig == [Signature("water", 2), Signature("ship", 2), Signature("rowHint", 2), Signature("colHint", 2)]
    assert b.output_sig == [Signature("ship", 4)]
    assert (b.input_keyword, b.output_keyword) == ("input", "output")


def test_battleship_declarations(battleship):
    b = find_block(battleship, "Battleship")
    assert [str(d) for d in b.atom_decls] == [
        "water(X,Y)", "ship(X,Y)", "rowHint(X,H)", "colHint(Y,H)", "ship(X1,Y1,X2,Y2)",
    ]  # fmt: skip
    assert b.atom_decls[0].description == "there is no ship at position (X,Y)"
    xy, rest = b.term_decls
    assert xy.names == ("X", "Y")
    assert xy.type_spec == FromList(tuple(parse_asp(f"p({i}).").rules[0].head.args[0] for i in range(1, 11)))
    assert xy.description == "X (Y) is a row (column) index ranging from 1 to 10"
    assert rest.names == ("X1", "Y1", "X2", "Y2")
    assert rest.type_spec == SameRangeAs("X")


def test_battleship_conditions(battleship):
    excl, over = find_block(battleship, "Battleship").conditions
    assert (excl.kind, excl.name, excl.mode, excl.test_atoms, len(excl.rules)) == (
        "precondition", "Excl", "never", (Atom("clash"),), 1,
    )  # fmt: skip
    assert excl.description == "no square shows both water and a part of a ship"
    assert (over.kind, over.name, over.mode, over.test_atoms, len(over.rules)) == (
        "postcondition", "Overlength", "never", (Atom("ov"),), 2,
    )  # fmt: skip


def test_battleship_test_cases(battleship):
    first, second, third = battleship.test_cases
    assert first.name == "ShipTopLeftCorner"
    assert first.scope == ("Guess",)
    assert first.conditions == [TestAtoms((Atom("goalShip"),), Mode("trueinatleast", 1))]
    assert [str(r) for r in first.rules] == ["goalShip :- ship(1,1,1,4)."]
    assert first.description == "a ship is horizontally placed at the top-left corner"
    assert second.scope == ("Guess",)
    assert third.scope == ("Guess", "Touch")
    assert str(third.conditions[0]) == "@falseinall forbiddenShip"


def test_test_case_rules_stay_out_of_blocks(battleship):
    heads = {str(r.head) for b in battleship.blocks() for r in b.rules}
    assert "goalShip" not in heads and "forbiddenShip" not in heads


def test_guess_rules(battleship):
    # "r(1..10). c(1..10)." are two statements, so Guess holds four rules
    rules = find_block(battleship, "Guess").rules
    assert [str(r) for r in rules][:2] == ["r(1..10).", "c(1..10)."]
    assert len(rules) == 4


# --- parse_lana errors and diagnostics --------------------------------------------


def parse(text, file="t.lp"):
    return parse_source(text, file)


def test_close_without_open():
    with pytest.raises(OverlappingBlocks):
        parse("%** } *%")


def test_block_never_closed():
    with pytest.raises(OverlappingBlocks):
        parse("%** @block A { *%\np.")


def test_duplicate_block_name():
    with pytest.raises(DuplicateBlockName):
        parse("%** @block A { } @block A { } *%")


def test_malformed_signature_list():
    with pytest.raises(MalformedSignatureList):
        parse("%** @block A { @input water/two } *%")


def test_nonground_test_atom():
    with pytest.raises(NonGroundTestAtom):
        parse("%** @testcase T @scope A @testatoms p(X) @trueinall *%")


def test_nonground_condition_atom():
    with pytest.raises(NonGroundTestAtom):
        parse("%** @block A { @precon C { @never p(X) p(1). } } *%")


def test_testatoms_need_a_mode():
    with pytest.raises(MalformedAnnotation):
        parse("%** @testcase T @scope A @testatoms p *%")


def test_with_requires_placeholder():
    with pytest.raises(MalformedAnnotation):
        parse("%** @term X @with integer(Y) *%")


def test_unknown_keyword_is_a_warning():
    ap, diags = parse("%** @block A { @colour red } *%")
    assert [(d.severity, d.code) for d in diags] == [("warning", "UnknownKeyword")]
    assert (diags[0].location.line, diags[0].location.column) == (1, 16)
    assert find_block(ap, "A") is not None


def test_unnamed_block_gets_a_synthetic_name():
    ap, _ = parse("\n%** @block { *% p. %** } *%")
    (child,) = ap.root.children
    assert child.name == "block@2"


def test_requires_and_defines_keep_their_keyword():
    ap, _ = parse("%** @block A { @requires e/2 @defines p/1 } *%")
    a = find_block(ap, "A")
    assert (a.input_keyword, a.output_keyword) == ("requires", "defines")
    assert a.input_sig == [Signature("e", 2)]


def test_with_type_keeps_embedded_code():
    ap, _ = parse("%** @term X @with integer(#V)\n integer(1..1000).\n an index *%")
    (decl,) = ap.root.term_decls
    assert [str(el) for el in decl.type_spec.body] == ["integer(#V)"]
    assert [str(r) for r in decl.type_spec.code] == ["integer(1..1000)."]
    assert decl.description == "an index"


def test_mode_keywords_share_the_atoms():
    ap, _ = parse("%** @testcase T @scope A @testatoms p, q @trueinatleast 1 @falseinatleast 2 *%")
    (tc,) = ap.test_cases
    assert [str(c) for c in tc.conditions] == ["@trueinatleast 1 p, q", "@falseinatleast 2 p, q"]


def test_shadowed_declaration_warns():
    _, diags = parse("%** @term X @from 1 @block A { @term X @from 2 } *%")
    assert [d.code for d in diags] == ["ShadowedDeclaration"]


def test_diagnostics_lie_inside_the_input():
    text = "p.\n%** @block A {\n  @weird thing\n} *%\nq."
    _, diags = parse(text)
    lines = text.splitlines()
    for d in diags:
        assert 1 <= d.location.line <= len(lines)
        assert 1 <= d.location.column <= len(lines[d.location.line - 1])


# --- model operations ------------------------------------------------------------


def test_find_block(battleship):
    guess = find_block(battleship, "Guess")
    assert guess.parent.name == "Battleship"
    assert find_block(battleship, "NoSuchBlock") is None
    assert find_block(battleship, battleship.root.name) is battleship.root


def test_effective_declarations_inherit(battleship):
    atoms, terms = effective_declarations(find_block(battleship, "Guess"))
    assert Signature("ship", 4) in {d.signature for d in atoms}
    assert [t.names for t in terms] == [("X", "Y"), ("X1", "Y1", "X2", "Y2")]
    assert effective_declarations(battleship.root) == ([], [])


def test_effective_declarations_shadow():
    ap, _ = parse("%** @term X, Y @from 1 @block A { @term X @from 2 } *%")
    _, terms = effective_declarations(find_block(ap, "A"))
    assert [(t.names, t.type_spec) for t in terms] == [
        (("Y",), FromList((parse_asp("p(1).").rules[0].head.args[0],))),
        (("X",), FromList((parse_asp("p(2).").rules[0].head.args[0],))),
    ]


def test_scope_rules(battleship):
    guess = scope_rules(battleship, ["Guess"])
    assert guess == find_block(battleship, "Guess").rules
    ap, _ = load("battleship_small.lp")
    both = scope_rules(ap, ["Guess", "Touch"])
    assert len(both) == len(find_block(ap, "Guess").rules)
    with pytest.raises(UnknownBlock):
        scope_rules(battleship, ["Nope"])


def test_scope_of_root_is_every_rule_once():
    ap, _ = parse("a. %** @block A { *% b. %** @block B { *% c. %** } *% d. %** } *% e.")
    rules = scope_rules(ap, [ap.root.name])
    assert [str(r) for r in rules] == ["a.", "b.", "c.", "d.", "e."]


def test_hidden_atoms():
    ap, _ = parse("%** @block A { @input e/2 @output p/1 *% p(X) :- e(X,Y), aux(Y). aux(1). %** } *%")
    assert hidden_atoms(find_block(ap, "A")) == [Signature("aux", 1)]
    ap, _ = load("battleship_full.lp")
    assert hidden_atoms(find_block(ap, "Guess")) == []


def test_multi_file_program():
    ap, _ = parse_sources({"b.lp": "%** @block B { *% q. %** } *%", "a.lp": "p."})
    assert ap.root.name == PROGRAM_ROOT
    assert [c.name for c in ap.root.children] == ["a.lp", "b.lp"]
    assert [str(r) for r in scope_rules(ap, [PROGRAM_ROOT])] == ["p.", "q."]
    with pytest.raises(DuplicateBlockName):
        parse_sources({"a.lp": "%** @block B { } *%", "b.lp": "%** @block B { } *%"})


# --- properties -------------------------------------------------------------------


@st.composite
def block_sources(draw):
    counter = iter(range(1000))

    def body(depth):
        parts = []
        for _ in range(draw(st.integers(0, 3))):
            kind = draw(st.sampled_from(["rule", "block", "atom"] if depth < 3 else ["rule", "atom"]))
            k = next(counter)
            if kind == "rule":
                parts.append(f"p{k}(1) :- q({k}).")
            elif kind == "atom":
                parts.append(f"%** @atom a{k}(X) the a{k} relation *%")
            else:
                parts.append(f"%** @block B{k} {{ block {k} *%\n{body(depth + 1)}\n%** }} *%")
        return "\n".join(parts)

    return body(0)


@settings(max_examples=80, deadline=None)
@given(block_sources())
def test_round_trip_and_invisibility(text):
    segments = extract_annotations(text, "g.lp")
    ap, _ = parse_lana(segments, "g.lp")
    again, _ = parse_lana(extract_annotations(render_segments(segments), "g.lp"), "g.lp")
    assert again == ap

    plain = "\n".join(s.content for s in segments if isinstance(s, RuleText))
    every = [r for b in ap.blocks() for r in b.rules] + [r for t in ap.test_cases for r in t.rules]
    assert sorted(map(str, parse_asp(plain))) == sorted(map(str, every))

    for block in ap.blocks():
        for child in block.children:
            if block.location is not None:
                assert block.location < child.location and child.end < block.end
        kids = block.children
        for left, right in zip(kids, kids[1:]):
            assert left.end < right.location


def test_battleship_round_trip(battleship):
    segments = extract_annotations((FIXTURES / "battleship_full.lp").read_text(), "battleship_full.lp")
    again, _ = parse_lana(extract_annotations(render_segments(segments), "battleship_full.lp"), "battleship_full.lp")
    assert again == battleship


# --- parse_testsuite --------------------------------------------------------------

SKELETON = """@testsuite name
 description
@program    battleship.lp
@programdir progs
@test       testCaseFile1
@test       testCaseFile2
@testdir    tests
@solvertype {solver}
@solver     /usr/bin/{solver} --verbose=0
"""


def test_testsuite_skeleton():
    cfg = parse_testsuite(SKELETON.format(solver="clingo"), "/work/suite")
    assert cfg.name == "name" and cfg.description == "description"
    assert cfg.test_files == ["testCaseFile1", "testCaseFile2"]
    assert cfg.test_paths()[0] == Path("/work/tests/testCaseFile1")
    assert cfg.program_paths() == [Path("/work/progs/battleship.lp")]
    assert (cfg.solver_type, cfg.solver_cmd) == ("clingo", "/usr/bin/clingo --verbose=0")


def test_testsuite_clasp_needs_grounder():
    with pytest.raises(GrounderRequired):
        parse_testsuite(SKELETON.format(solver="clasp"))
    cfg = parse_testsuite(SKELETON.format(solver="clasp") + "@grounder gringo\n")
    assert cfg.grounder_cmd == "gringo"


def test_testsuite_name_defaults_to_file_name():
    text = "@program p.lp\n@test t.lp\n@solvertype internal\n"
    cfg = parse_testsuite(text, "/tmp/suite1")
    assert cfg.name == "suite1"
    assert cfg.program_dir == Path("/tmp") and cfg.test_dir == Path("/tmp")


def test_testsuite_missing_fields():
    with pytest.raises(MissingField):
        parse_testsuite("@program p.lp\n@solvertype internal\n")
    with pytest.raises(MissingField):
        parse_testsuite("@test t.lp\n@solvertype internal\n")
    with pytest.raises(MissingField):
        parse_testsuite("@program p.lp\n@test t.lp\n")
    with pytest.raises(UnknownSolverType):
        parse_testsuite("@program p.lp\n@test t.lp\n@solvertype smodels\n")
