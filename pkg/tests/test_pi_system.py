from pathlib import Path

import pytest

from proofbench.errors import ParseError, ResourceLimitError
from proofbench.pi_system import (
    Accept,
    AxiomInstance,
    AxiomPack,
    Derivation,
    FbarAtom,
    Greater,
    IntTyping,
    Line,
    Num,
    Reject,
    Sum,
    Var,
    can_form,
    check_derivation,
    derivation_file_text,
    make_axiom_pack,
    negate_fbar,
    parse_derivation_file,
    parse_statement,
    pretty_statement,
    pretty_term,
)
from proofbench.qlang import fbar_truth

FIXTURE = Path(__file__).resolve().parent.parent / "fixtures" / "paper_3_1.drv"


# -- statements ---------------------------------------------------------------------

@pytest.mark.parametrize(
    "text",
    ["fbar(12) is 1", "fbar(1) is 0", "int(w)", "int(w+1)", "int((w+1)+1)",
     "w > 0", "(w+1)+1 > w", "w+1 > w", "int(3)", "0+1 > 0"],
)
def test_statement_round_trip(text):
    assert pretty_statement(parse_statement(text)) == text


def test_statement_parsing_is_lenient_about_parens_and_spaces():
    assert pretty_statement(parse_statement("int(((w)+(1)))")) == "int(w+1)"
    assert pretty_statement(parse_statement("  fbar( 3 )  is  1 ")) == "fbar(3) is 1"
    assert pretty_statement(parse_statement("(w+1) > (w)")) == "w+1 > w"


@pytest.mark.parametrize(
    "text",
    ["", "fbar(0) is 1", "fbar(3) is 2", "fbar(03) is 1", "int(07)",
     "int(w+1+1)", "int(w+)", "w <", "w", "int(ww)", "fbar(3) was 1",
     "int(w) > w extra"],
)
def test_statement_parse_rejects(text):
    with pytest.raises(ParseError):
        parse_statement(text)


def test_term_printing_parenthesizes_nested_sums_only():
    term = Sum(Sum(Var("w"), Num(1)), Num(1))
    assert pretty_term(term) == "(w+1)+1"
    assert pretty_statement(Greater(term, Var("w"))) == "(w+1)+1 > w"


def test_fbar_atom_validation():
    with pytest.raises(ValueError):
        FbarAtom(0, 1)
    with pytest.raises(ValueError):
        FbarAtom(3, 2)


def test_can_form_and_negation():
    statement = parse_statement("fbar(3) is 1")
    assert can_form(statement)
    assert can_form(parse_statement("int(w)"))
    assert negate_fbar(statement) == FbarAtom(3, 0)
    assert negate_fbar(negate_fbar(statement)) == statement
    with pytest.raises(ValueError):
        negate_fbar(parse_statement("int(w)"))
    assert not can_form("fbar(3) is 1")


# -- axiom packs ----------------------------------------------------------------------

def test_make_axiom_pack_holds_true_bits():
    pack = make_axiom_pack(5)
    assert pack.n == 5
    assert pack.entries == frozenset((x, fbar_truth(x)) for x in range(1, 6))


def test_make_axiom_pack_edges():
    assert make_axiom_pack(0).entries == frozenset()
    with pytest.raises(ValueError):
        make_axiom_pack(-1)
    with pytest.raises(ResourceLimitError):
        make_axiom_pack(100, max_cells=10)


# -- derivation files ------------------------------------------------------------------

def fixture_text():
    return FIXTURE.read_text(encoding="utf-8")


def test_fixture_parses_and_round_trips_byte_for_byte():
    text = fixture_text()
    derivation, target = parse_derivation_file(text)
    assert derivation.header == ("w",)
    assert len(derivation.lines) == 6
    assert pretty_statement(target) == "(w+1)+1 > w"
    assert derivation_file_text(derivation, target) == text


def test_fixture_accepts_under_any_pack():
    derivation, target = parse_derivation_file(fixture_text())
    for n in (0, 5):
        assert check_derivation(make_axiom_pack(n), derivation, target) == Accept()


@pytest.mark.parametrize(
    "mangle",
    [
        lambda t: t.replace("vars: w\n", ""),                      # missing header
        lambda t: t.replace("target: (w+1)+1 > w\n", ""),          # missing target
        lambda t: t.replace("3. int(w+1)", "4. int(w+1)"),         # index gap
        lambda t: t.replace("1. int(w) [premise]", "1. int(w)"),   # no justification
        lambda t: t.replace("[premise]", "[guesswork]"),           # unknown keyword
        lambda t: t.replace("vars: w", "vars: w, w"),              # duplicate variable
        lambda t: t.replace("vars: w", "vars: omega"),             # multi-letter variable
        lambda t: t.replace("{t := w}", "{t := }"),                # empty substitution term
        lambda t: t.replace("rule R1 4,5", "rule R1"),             # missing references
    ],
)
def test_malformed_files_are_parse_errors(mangle):
    with pytest.raises(ParseError):
        parse_derivation_file(mangle(fixture_text()))


def test_empty_derivation_rejects_with_wrong_target():
    derivation, target = parse_derivation_file("vars:\ntarget: fbar(1) is 1\n")
    verdict = check_derivation(make_axiom_pack(5), derivation, target)
    assert verdict == Reject(0, "wrong-target")


# -- the checker, one reason code at a time ---------------------------------------------

def check_mutant(text, pack_n=0):
    derivation, target = parse_derivation_file(text)
    return check_derivation(make_axiom_pack(pack_n), derivation, target)


def test_reason_bad_substitution():
    verdict = check_mutant(fixture_text().replace("{t := w+1}", "{t := w}"))
    assert verdict == Reject(4, "bad-substitution")


def test_reason_premise_not_declared():
    verdict = check_mutant(fixture_text().replace("vars: w", "vars: v"))
    assert verdict == Reject(1, "premise-not-declared")


def test_reason_rule_mismatch():
    verdict = check_mutant(fixture_text().replace("rule R1 4,5", "rule R1 5,4"))
    assert verdict == Reject(6, "rule-mismatch")


def test_reason_forward_reference():
    verdict = check_mutant(fixture_text().replace("rule R1 4,5", "rule R1 4,6"))
    assert verdict == Reject(6, "forward-reference")


def test_reason_wrong_target():
    verdict = check_mutant(fixture_text().replace("target: (w+1)+1 > w", "target: w+1 > w"))
    assert verdict == Reject(6, "wrong-target")


def test_fbar_axiom_requires_pack_membership():
    text = "vars:\ntarget: fbar(3) is 1\n1. fbar(3) is 1 [axiom FBAR(3)]\n"
    assert check_mutant(text, pack_n=5) == Accept()
    assert check_mutant(text, pack_n=0) == Reject(1, "bad-substitution")
    flipped = text.replace("is 1", "is 0")
    assert check_mutant(flipped, pack_n=5) == Reject(1, "bad-substitution")


def test_fbar_axiom_index_must_match_statement():
    derivation = Derivation(
        (), (Line(1, FbarAtom(3, 1), AxiomInstance("FBAR", (("i", Num(2)),))),)
    )
    verdict = check_derivation(make_axiom_pack(5), derivation, FbarAtom(3, 1))
    assert verdict == Reject(1, "bad-substitution")


def test_checker_is_deterministic():
    derivation, target = parse_derivation_file(fixture_text())
    pack = make_axiom_pack(3)
    assert check_derivation(pack, derivation, target) == check_derivation(pack, derivation, target)


def test_axiom_premises_must_be_earlier_lines_not_later():
    # move int(w+1) after the A1 line that needs it: structurally fine,
    # but the premise is not yet derived when A1 fires
    text = (
        "vars: w\n"
        "target: (w+1)+1 > w+1\n"
        "1. int(w) [premise]\n"
        "2. int(1) [axiom A3 {c := 1}]\n"
        "3. (w+1)+1 > w+1 [axiom A1 {t := w+1}]\n"
        "4. int(w+1) [axiom A2 {t1 := w, t2 := 1}]\n"
    )
    assert check_mutant(text) == Reject(3, "rule-mismatch")


def test_hand_built_corrupt_pack_is_representable():
    # packs are plain data: an adversarial pack with both bits is expressible
    pack = AxiomPack(2, frozenset([(2, 0), (2, 1)]))
    text0 = "vars:\ntarget: fbar(2) is 0\n1. fbar(2) is 0 [axiom FBAR(2)]\n"
    text1 = "vars:\ntarget: fbar(2) is 1\n1. fbar(2) is 1 [axiom FBAR(2)]\n"
    derivation0, target0 = parse_derivation_file(text0)
    derivation1, target1 = parse_derivation_file(text1)
    assert check_derivation(pack, derivation0, target0) == Accept()
    assert check_derivation(pack, derivation1, target1) == Accept()
