"""Budgeted derivation search, a static fbar decider, and pack audits.

The search procedure plays the role of a dovetailing prover: generate
candidate derivations in a fixed order, check each one mechanically, and halt
on the first candidate that derives the target — or, when the target is an
fbar atom, its opposite-bit negation, whichever comes first.  Real provers of
this shape never stop on underivable targets, so every search here carries a
budget and reports Exhausted with the number of candidates tried.

Two candidate orders are provided.

``structured`` saturates forward from the available axioms: declared premises
and pack entries seed a FIFO worklist; popping int(t) fires A1 and pairs t
with every previously processed term through A2 (both orders, plus t+t);
popping an ordering joins it with previously processed orderings through R1
via indexes on the shared middle term; and one fresh numeral axiom int(0),
int(1), ... is injected per pop so that every numeral is eventually
available.  Each *new* statement is one candidate, goal-tested on arrival.
The stream is deterministic, duplicate-free, and eventually contains every
derivable statement, so a sufficient budget finds every derivable target.

``literal`` enumerates proof terms as raw strings in shortlex order over a
small alphabet and skips the (vast majority of) strings that decode to
nothing, counting them as candidates tried.  The encoding is positional:

    p<var>          premise int(var), for a variable of the target
    c<numeral>.     axiom int(numeral)
    F<numeral>.     pack axiom fbar(numeral) is b, b read off the pack
    a<P>            from a proof of int(t), conclude t+1 > t
    b<P><P>         from proofs of int(t1), int(t2), conclude int(t1+t2)
    r<P><P>         from proofs of a > b and b > c, conclude a > c

(When a hand-built pack carries both bits for the same index, F picks bit 0.)
Every derivable statement has a proof term, so literal mode is exhaustive in
the limit as well — just spectacularly slower, which is why it is exercised
on one-line targets.  Found proofs in either mode are rebuilt into derivation
files with shared sub-proofs deduplicated, then re-checked before the verdict
is returned; a verdict never carries a derivation the checker would reject.

Derivability of fbar atoms does not need search at all: the pack rule is the
only producer of fbar statements and no rule consumes them, so an fbar atom
is derivable exactly when it is a pack entry.  decide_fbar implements that
lookup, completeness_gap lists the indices where neither bit is derivable,
and the audits sweep the decider for soundness (derivable implies true) and
consistency (never both bits) violations.
"""

from __future__ import annotations

import enum
import time
from collections import deque
from dataclasses import dataclass

from .enumerator import Alphabet, unrank
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
    RuleApplication,
    Sum,
    Var,
    can_form,
    check_derivation,
    negate_fbar,
    statement_vars,
)

DERIVABLE = "Derivable"
NOT_DERIVABLE = "NotDerivable"


class SearchMode(enum.Enum):
    LITERAL = "literal"
    STRUCTURED = "structured"


@dataclass(frozen=True)
class SearchBudget:
    max_candidates: int | None = None
    max_seconds: float | None = None

    def __post_init__(self):
        if self.max_candidates is None and self.max_seconds is None:
            raise ValueError("a search budget needs a candidate or time limit")
        if self.max_candidates is not None and self.max_candidates < 1:
            raise ValueError("candidate limit must be >= 1")
        if self.max_seconds is not None and self.max_seconds <= 0:
            raise ValueError("time limit must be positive")


@dataclass(frozen=True)
class DerivedTarget:
    derivation: Derivation
    candidates: int

@dataclass(frozen=True)
class DerivedNegation:
    derivation: Derivation
    candidates: int

@dataclass(frozen=True)
class Exhausted:
    candidates: int


# -- shared reconstruction -----------------------------------------------------

def _reconstruct(header, origins, goal) -> Derivation:
    """Rebuild a derivation file from origin tags, deduplicating sub-proofs."""
    lines: list = []
    index_of: dict = {}

    def visit(stmt) -> int:
        if stmt in index_of:
            return index_of[stmt]
        tag = origins[stmt]
        kind = tag[0]
        if kind == "premise":
            just = Premise()
        elif kind == "A3":
            just = AxiomInstance("A3", (("c", Num(tag[1])),))
        elif kind == "FBAR":
            just = AxiomInstance("FBAR", (("i", Num(tag[1])),))
        elif kind == "A1":
            visit(IntTyping(tag[1]))
            just = AxiomInstance("A1", (("t", tag[1]),))
        elif kind == "A2":
            visit(IntTyping(tag[1]))
            visit(IntTyping(tag[2]))
            just = AxiomInstance("A2", (("t1", tag[1]), ("t2", tag[2])))
        else:  # R1
            first = visit(tag[1])
            second = visit(tag[2])
            just = RuleApplication("R1", (first, second))
        index = len(lines) + 1
        lines.append(Line(index, stmt, just))
        index_of[stmt] = index
        return index

    visit(goal)
    return Derivation(tuple(header), tuple(lines))


def _verdict(pack, target, goal, header, origins, candidates):
    derivation = _reconstruct(header, origins, goal)
    if not isinstance(check_derivation(pack, derivation, goal), Accept):
        raise RuntimeError("search produced a derivation the checker rejects")
    if goal == target:
        return DerivedTarget(derivation, candidates)
    return DerivedNegation(derivation, candidates)


# -- structured mode -----------------------------------------------------------

class _Found(Exception):
    def __init__(self, statement):
        self.statement = statement

class _BudgetHit(Exception):
    pass


def _search_structured(pack: AxiomPack, target, budget: SearchBudget):
    started = time.monotonic()
    header = statement_vars(target)
    negation = negate_fbar(target) if isinstance(target, FbarAtom) else None
    origins: dict = {}
    queue: deque = deque()
    candidates = 0

    def emit(stmt, tag):
        nonlocal candidates
        if stmt in origins:
            return
        if budget.max_candidates is not None and candidates >= budget.max_candidates:
            raise _BudgetHit
        candidates += 1
        origins[stmt] = tag
        queue.append(stmt)
        if stmt == target or stmt == negation:
            raise _Found(stmt)

    ints_seen: list = []
    greater_by_lhs: dict = {}
    greater_by_rhs: dict = {}
    next_numeral = 0

    try:
        for name in header:
            emit(IntTyping(Var(name)), ("premise",))
        for i, bit in sorted(pack.entries):
            emit(FbarAtom(i, bit), ("FBAR", i))
        while True:
            if budget.max_seconds is not None and time.monotonic() - started >= budget.max_seconds:
                return Exhausted(candidates)
            # the numeral stream keeps the worklist fed even from empty seeds
            emit(IntTyping(Num(next_numeral)), ("A3", next_numeral))
            next_numeral += 1
            stmt = queue.popleft()
            if isinstance(stmt, IntTyping):
                t = stmt.term
                emit(Greater(Sum(t, Num(1)), t), ("A1", t))
                for u in ints_seen:
                    emit(IntTyping(Sum(t, u)), ("A2", t, u))
                    emit(IntTyping(Sum(u, t)), ("A2", u, t))
                emit(IntTyping(Sum(t, t)), ("A2", t, t))
                ints_seen.append(t)
            elif isinstance(stmt, Greater):
                lhs, rhs = stmt.lhs, stmt.rhs
                for other in greater_by_lhs.get(rhs, ()):
                    emit(Greater(lhs, other.rhs), ("R1", stmt, other))
                for other in greater_by_rhs.get(lhs, ()):
                    emit(Greater(other.lhs, rhs), ("R1", other, stmt))
                greater_by_lhs.setdefault(lhs, []).append(stmt)
                greater_by_rhs.setdefault(rhs, []).append(stmt)
            # fbar atoms feed no rule; they were goal-tested on arrival
    except _BudgetHit:
        return Exhausted(candidates)
    except _Found as found:
        return _verdict(pack, target, found.statement, header, origins, candidates)
    return Exhausted(candidates)


# -- literal mode ----------------------------------------------------------------

_LITERAL_BASE = "0123456789.Fabcpr"


def _literal_alphabet(header) -> Alphabet:
    extra = "".join(sorted(name for name in header if name not in _LITERAL_BASE))
    return Alphabet.from_string(_LITERAL_BASE + extra)


def _decode_numeral(text: str, pos: int):
    start = pos
    while pos < len(text) and text[pos].isdigit():
        pos += 1
    digits = text[start:pos]
    if not digits or (digits[0] == "0" and len(digits) > 1):
        return None
    if pos >= len(text) or text[pos] != ".":
        return None
    return int(digits), pos + 1


def _decode(text: str, pack: AxiomPack, header, origins: dict):
    """Decode one proof term; returns (statement, end position) or None."""

    def rec(pos: int):
        if pos >= len(text):
            return None
        head = text[pos]
        if head == "p":
            if pos + 1 >= len(text) or text[pos + 1] not in header:
                return None
            stmt = IntTyping(Var(text[pos + 1]))
            origins[stmt] = ("premise",)
            return stmt, pos + 2
        if head == "c":
            numeral = _decode_numeral(text, pos + 1)
            if numeral is None:
                return None
            value, end = numeral
            stmt = IntTyping(Num(value))
            origins[stmt] = ("A3", value)
            return stmt, end
        if head == "F":
            numeral = _decode_numeral(text, pos + 1)
            if numeral is None:
                return None
            index, end = numeral
            if index < 1:
                return None
            for bit in (0, 1):
                if (index, bit) in pack.entries:
                    stmt = FbarAtom(index, bit)
                    origins[stmt] = ("FBAR", index)
                    return stmt, end
            return None
        if head == "a":
            sub = rec(pos + 1)
            if sub is None or not isinstance(sub[0], IntTyping):
                return None
            t = sub[0].term
            stmt = Greater(Sum(t, Num(1)), t)
            origins[stmt] = ("A1", t)
            return stmt, sub[1]
        if head == "b":
            first = rec(pos + 1)
            if first is None or not isinstance(first[0], IntTyping):
                return None
            second = rec(first[1])
            if second is None or not isinstance(second[0], IntTyping):
                return None
            t1, t2 = first[0].term, second[0].term
            stmt = IntTyping(Sum(t1, t2))
            origins[stmt] = ("A2", t1, t2)
            return stmt, second[1]
        if head == "r":
            first = rec(pos + 1)
            if first is None or not isinstance(first[0], Greater):
                return None
            second = rec(first[1])
            if second is None or not isinstance(second[0], Greater):
                return None
            if first[0].rhs != second[0].lhs:
                return None
            stmt = Greater(first[0].lhs, second[0].rhs)
            origins[stmt] = ("R1", first[0], second[0])
            return stmt, second[1]
        return None

    result = rec(0)
    if result is None or result[1] != len(text):
        return None
    return result[0]


def _search_literal(pack: AxiomPack, target, budget: SearchBudget):
    started = time.monotonic()
    header = statement_vars(target)
    negation = negate_fbar(target) if isinstance(target, FbarAtom) else None
    alphabet = _literal_alphabet(header)
    candidates = 0
    rank = 0
    while True:
        if budget.max_candidates is not None and candidates >= budget.max_candidates:
            return Exhausted(candidates)
        if (
            budget.max_seconds is not None
            and rank % 1024 == 0
            and time.monotonic() - started >= budget.max_seconds
        ):
            return Exhausted(candidates)
        text = unrank(alphabet, rank)
        rank += 1
        candidates += 1
        origins: dict = {}
        stmt = _decode(text, pack, header, origins)
        if stmt is not None and (stmt == target or stmt == negation):
            return _verdict(pack, target, stmt, header, origins, candidates)


def search(pack: AxiomPack, target, budget: SearchBudget, mode: SearchMode):
    """Dual derivability search: first derivation of target (or, for fbar
    targets, of the opposite bit) wins; Exhausted when the budget runs out.

    Deterministic: identical inputs give identical verdicts and counts
    (time-limited budgets excepted, since wall clocks differ run to run).
    """
    if not can_form(target):
        raise ValueError(f"not a statement of the system: {target!r}")
    mode = SearchMode(mode)
    if mode is SearchMode.STRUCTURED:
        return _search_structured(pack, target, budget)
    return _search_literal(pack, target, budget)


# -- static decidability and audits ---------------------------------------------

def decide_fbar(pack: AxiomPack, s: FbarAtom) -> str:
    """Exact derivability of an fbar atom: pack membership, no search.

    Sound because the pack rule is the only way an fbar statement ever enters
    a derivation and no inference consumes one, so the derivable fbar atoms
    are precisely the pack entries.
    """
    if not isinstance(s, FbarAtom):
        raise ValueError(f"not an fbar statement: {s!r}")
    return DERIVABLE if (s.x, s.bit) in pack.entries else NOT_DERIVABLE


def completeness_gap(pack: AxiomPack, x_max: int) -> list:
    """Indices x <= x_max where neither bit of fbar(x) is derivable."""
    if x_max < 1:
        raise ValueError("x_max must be >= 1")
    return [
        x
        for x in range(1, x_max + 1)
        if decide_fbar(pack, FbarAtom(x, 0)) == NOT_DERIVABLE
        and decide_fbar(pack, FbarAtom(x, 1)) == NOT_DERIVABLE
    ]


@dataclass(frozen=True)
class AuditReport:
    kind: str
    queries: int
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def audit_soundness(pack: AxiomPack) -> AuditReport:
    """Check that every derivable fbar bit is the true one.

    Sweeps both bits for every x covered by the pack; a violation (x, bit)
    means fbar(x) is bit is derivable but the flipped-diagonal truth differs.
    """
    from .qlang import fbar_truth

    violations = []
    queries = 0
    for x in range(1, pack.n + 1):
        truth = fbar_truth(x)
        for bit in (0, 1):
            queries += 1
            if decide_fbar(pack, FbarAtom(x, bit)) == DERIVABLE and bit != truth:
                violations.append((x, bit))
    return AuditReport("soundness", queries, tuple(violations))


def audit_consistency(pack: AxiomPack, x_max: int) -> AuditReport:
    """Check that no index has both fbar bits derivable."""
    if x_max < 1:
        raise ValueError("x_max must be >= 1")
    violations = []
    queries = 0
    for x in range(1, x_max + 1):
        queries += 2
        if (
            decide_fbar(pack, FbarAtom(x, 0)) == DERIVABLE
            and decide_fbar(pack, FbarAtom(x, 1)) == DERIVABLE
        ):
            violations.append(x)
    return AuditReport("consistency", queries, tuple(violations))
