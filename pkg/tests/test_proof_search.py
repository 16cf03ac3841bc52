from pathlib import Path

import pytest

from proofbench.pi_system import (
    Accept,
    AxiomPack,
    FbarAtom,
    check_derivation,
    derivation_file_text,
    make_axiom_pack,
    negate_fbar,
    parse_statement,
)
from proofbench.proof_search import (
    DERIVABLE,
    NOT_DERIVABLE,
    DerivedNegation,
    DerivedTarget,
    Exhausted,
    SearchBudget,
    SearchMode,
    audit_consistency,
    audit_soundness,
    completeness_gap,
    decide_fbar,
    search,
)
from proofbench.qlang import fbar_truth

FIXTURE = Path(__file__).resolve().parent.parent / "fixtures" / "paper_3_1.drv"

EMPTY = make_axiom_pack(0)
PACK5 = make_axiom_pack(5)


def candidates_budget(n):
    return SearchBudget(max_candidates=n)


# -- budgets ---------------------------------------------------------------------

def test_budget_needs_a_finite_limit():
    with pytest.raises(ValueError):
        SearchBudget()
    with pytest.raises(ValueError):
        SearchBudget(max_candidates=0)
    with pytest.raises(ValueError):
        SearchBudget(max_seconds=0)
    SearchBudget(max_seconds=0.5)
    SearchBudget(max_candidates=1, max_seconds=1)


def test_search_requires_a_formable_target():
    with pytest.raises(ValueError):
        search(EMPTY, "not a statement", candidates_budget(10), SearchMode.STRUCTURED)


# -- structured mode ----------------------------------------------------------------

def test_structured_search_reconstructs_the_fixture_derivation():
    target = parse_statement("(w+1)+1 > w")
    verdict = search(EMPTY, target, candidates_budget(10**6), SearchMode.STRUCTURED)
    assert isinstance(verdict, DerivedTarget)
    assert check_derivation(EMPTY, verdict.derivation, target) == Accept()
    assert derivation_file_text(verdict.derivation, target) == FIXTURE.read_text(encoding="utf-8")


def test_structured_search_finds_fbar_entries_at_the_seeds():
    atom = FbarAtom(3, fbar_truth(3))
    verdict = search(PACK5, atom, candidates_budget(100), SearchMode.STRUCTURED)
    assert isinstance(verdict, DerivedTarget)
    assert len(verdict.derivation.lines) == 1
    assert verdict.candidates <= PACK5.n


def test_structured_search_derives_the_negation_of_a_false_bit():
    atom = FbarAtom(3, 1 - fbar_truth(3))
    verdict = search(PACK5, atom, candidates_budget(100), SearchMode.STRUCTURED)
    assert isinstance(verdict, DerivedNegation)
    assert check_derivation(PACK5, verdict.derivation, negate_fbar(atom)) == Accept()


def test_structured_search_exhausts_on_uncovered_indices():
    verdict = search(PACK5, FbarAtom(9, 1), candidates_budget(1500), SearchMode.STRUCTURED)
    assert verdict == Exhausted(1500)


def test_time_limited_search_terminates():
    verdict = search(PACK5, FbarAtom(9, 1), SearchBudget(max_seconds=0.1), SearchMode.STRUCTURED)
    assert isinstance(verdict, Exhausted)


# -- literal mode ---------------------------------------------------------------------

def test_literal_search_finds_one_line_fbar_derivations():
    atom = FbarAtom(3, fbar_truth(3))
    verdict = search(PACK5, atom, candidates_budget(10**5), SearchMode.LITERAL)
    assert isinstance(verdict, DerivedTarget)
    assert len(verdict.derivation.lines) == 1
    assert check_derivation(PACK5, verdict.derivation, atom) == Accept()


def test_literal_search_derives_negations_too():
    atom = FbarAtom(2, 1 - fbar_truth(2))
    verdict = search(PACK5, atom, candidates_budget(10**5), SearchMode.LITERAL)
    assert isinstance(verdict, DerivedNegation)


def test_literal_search_exhausts_exactly_at_the_budget():
    verdict = search(PACK5, FbarAtom(9, 0), candidates_budget(3000), SearchMode.LITERAL)
    assert verdict == Exhausted(3000)


def test_literal_search_handles_compound_targets():
    target = parse_statement("0+1 > 0")
    verdict = search(EMPTY, target, candidates_budget(10**6), SearchMode.LITERAL)
    assert isinstance(verdict, DerivedTarget)
    assert check_derivation(EMPTY, verdict.derivation, target) == Accept()


# -- invariants across modes -------------------------------------------------------------

@pytest.mark.parametrize("x", [1, 2, 3])
@pytest.mark.parametrize("bit", [0, 1])
def test_mode_agreement_on_fbar_targets(x, bit):
    atom = FbarAtom(x, bit)
    structured = search(PACK5, atom, candidates_budget(10**5), SearchMode.STRUCTURED)
    literal = search(PACK5, atom, candidates_budget(10**5), SearchMode.LITERAL)
    assert type(structured) is type(literal)
    structured_bytes = derivation_file_text(
        structured.derivation,
        atom if isinstance(structured, DerivedTarget) else negate_fbar(atom),
    )
    literal_bytes = derivation_file_text(
        literal.derivation,
        atom if isinstance(literal, DerivedTarget) else negate_fbar(atom),
    )
    assert len(structured_bytes) <= len(literal_bytes)


def test_mode_agreement_on_a_compound_target():
    target = parse_statement("0+1 > 0")
    structured = search(EMPTY, target, candidates_budget(10**6), SearchMode.STRUCTURED)
    literal = search(EMPTY, target, candidates_budget(10**6), SearchMode.LITERAL)
    assert isinstance(structured, DerivedTarget) and isinstance(literal, DerivedTarget)
    assert derivation_file_text(structured.derivation, target) == derivation_file_text(
        literal.derivation, target
    )


def test_search_agrees_with_the_static_decider():
    pack = make_axiom_pack(25)
    for x in range(1, 51):
        for bit in (0, 1):
            atom = FbarAtom(x, bit)
            verdict = search(pack, atom, candidates_budget(2000), SearchMode.STRUCTURED)
            if decide_fbar(pack, atom) == DERIVABLE:
                assert isinstance(verdict, DerivedTarget), (x, bit)
            elif decide_fbar(pack, negate_fbar(atom)) == DERIVABLE:
                assert isinstance(verdict, DerivedNegation), (x, bit)
            else:
                assert isinstance(verdict, Exhausted), (x, bit)


def test_search_halts_with_the_correct_bit_on_covered_indices():
    pack = make_axiom_pack(25)
    for x in range(1, 26):
        verdict = search(pack, FbarAtom(x, 1), candidates_budget(1000), SearchMode.STRUCTURED)
        implied = 1 if isinstance(verdict, DerivedTarget) else 0
        assert implied == fbar_truth(x)


def test_search_is_deterministic():
    target = parse_statement("(w+1)+1 > w")
    first = search(EMPTY, target, candidates_budget(10**6), SearchMode.STRUCTURED)
    second = search(EMPTY, target, candidates_budget(10**6), SearchMode.STRUCTURED)
    assert first == second
    exhausted_one = search(PACK5, FbarAtom(9, 1), candidates_budget(700), SearchMode.LITERAL)
    exhausted_two = search(PACK5, FbarAtom(9, 1), candidates_budget(700), SearchMode.LITERAL)
    assert exhausted_one == exhausted_two


def test_search_accepts_mode_names():
    verdict = search(PACK5, FbarAtom(3, fbar_truth(3)), candidates_budget(100), "structured")
    assert isinstance(verdict, DerivedTarget)


# -- the static decider --------------------------------------------------------------------

def test_decide_fbar_examples():
    true_bit = fbar_truth(3)
    assert decide_fbar(PACK5, FbarAtom(3, true_bit)) == DERIVABLE
    assert decide_fbar(PACK5, FbarAtom(3, 1 - true_bit)) == NOT_DERIVABLE
    assert decide_fbar(PACK5, FbarAtom(9, 0)) == NOT_DERIVABLE
    assert decide_fbar(PACK5, FbarAtom(9, 1)) == NOT_DERIVABLE


def test_decide_fbar_rejects_non_fbar_statements():
    with pytest.raises(ValueError):
        decide_fbar(PACK5, parse_statement("int(w)"))


def test_completeness_gap_examples():
    assert completeness_gap(PACK5, 8) == [6, 7, 8]
    assert completeness_gap(EMPTY, 3) == [1, 2, 3]
    assert completeness_gap(PACK5, 5) == []
    with pytest.raises(ValueError):
        completeness_gap(PACK5, 0)


# -- audits -----------------------------------------------------------------------------

def test_soundness_audit_passes_for_truth_built_packs():
    report = audit_soundness(make_axiom_pack(100))
    assert report.kind == "soundness"
    assert report.queries == 200
    assert report.violations == ()
    assert report.ok


def test_soundness_audit_catches_a_flipped_bit():
    entries = {(x, fbar_truth(x)) for x in range(1, 6)}
    entries.discard((3, fbar_truth(3)))
    entries.add((3, 1 - fbar_truth(3)))
    report = audit_soundness(AxiomPack(5, frozenset(entries)))
    assert report.violations == ((3, 1 - fbar_truth(3)),)
    assert not report.ok


def test_soundness_audit_on_the_empty_pack():
    report = audit_soundness(EMPTY)
    assert report.queries == 0
    assert report.ok


def test_consistency_audit_passes_for_truth_built_packs():
    report = audit_consistency(make_axiom_pack(50), 60)
    assert report.queries == 120
    assert report.violations == ()


def test_consistency_audit_catches_double_bits():
    pack = AxiomPack(2, frozenset([(2, 0), (2, 1)]))
    report = audit_consistency(pack, 5)
    assert report.violations == (2,)


def test_consistency_audit_on_the_empty_pack():
    assert audit_consistency(EMPTY, 10).violations == ()
    with pytest.raises(ValueError):
        audit_consistency(EMPTY, 0)
