"""Executable workbench for diagonalization and a mechanically checkable
derivation system: shortlex enumeration, a toy total language and its
flipped diagonal, a five-rule formal system with a single-pass checker, and
budgeted derivation search with a static derivability decider on top.
"""

from .enumerator import (
    Alphabet,
    Grammar,
    GrammarError,
    UnknownSymbolError,
    grammar_count,
    grammar_unrank,
    rank,
    stream,
    unrank,
)
from .errors import ParseError, ResourceLimitError
from .pi_system import (
    Accept,
    AxiomInstance,
    AxiomPack,
    Derivation,
    FbarAtom,
    Greater,
    IntTyping,
    Line,
    Num,
    Premise,
    Reject,
    RuleApplication,
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
from .proof_search import (
    DERIVABLE,
    NOT_DERIVABLE,
    AuditReport,
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
from .qlang import (
    QLANG_ALPHABET,
    QLANG_GRAMMAR,
    BitTable,
    QProgram,
    diagonal,
    diagonal_flip,
    evaluate,
    fbar_truth,
    nth_program,
    parse,
    table,
)

__all__ = [
    "Accept",
    "Alphabet",
    "AuditReport",
    "AxiomInstance",
    "AxiomPack",
    "BitTable",
    "DERIVABLE",
    "Derivation",
    "DerivedNegation",
    "DerivedTarget",
    "Exhausted",
    "FbarAtom",
    "Grammar",
    "GrammarError",
    "Greater",
    "IntTyping",
    "Line",
    "NOT_DERIVABLE",
    "Num",
    "ParseError",
    "Premise",
    "QLANG_ALPHABET",
    "QLANG_GRAMMAR",
    "QProgram",
    "Reject",
    "ResourceLimitError",
    "RuleApplication",
    "SearchBudget",
    "SearchMode",
    "Sum",
    "UnknownSymbolError",
    "Var",
    "audit_consistency",
    "audit_soundness",
    "can_form",
    "check_derivation",
    "completeness_gap",
    "decide_fbar",
    "derivation_file_text",
    "diagonal",
    "diagonal_flip",
    "evaluate",
    "fbar_truth",
    "grammar_count",
    "grammar_unrank",
    "make_axiom_pack",
    "negate_fbar",
    "nth_program",
    "parse",
    "parse_derivation_file",
    "parse_statement",
    "pretty_statement",
    "pretty_term",
    "rank",
    "search",
    "stream",
    "table",
    "unrank",
]
