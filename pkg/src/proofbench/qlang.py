"""A deliberately tiny, total expression language ("Q-lang").

Every well-formed program is a boolean expression over one variable x and
unbounded natural arithmetic; it maps each positive integer to a bit and
always terminates, so the language enumerates a family of total {0,1}-valued
functions.  Programs are ordered length-then-lex over the fixed 19-symbol
alphabet, which makes "the i-th program" exact and reproducible, and makes
the diagonal bit sequence (flip the i-th program's output on input i) a
computable object that provably differs from every row of the program table.

Grammar (fully parenthesized; no whitespace):

    prog := bexp
    bexp := '!' bexp | '(' bexp '&' bexp ')' | '(' bexp '|' bexp ')'
          | '(' aexp cmp aexp ')'
    cmp  := '=' | '>'
    aexp := 'x' | numeral | '(' aexp '+' aexp ')' | '(' aexp '%' aexp ')'

Numerals carry no leading zeros ("0" itself is allowed); `%` is remainder
with the totalizing convention a % 0 = 0.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .enumerator import Alphabet, Grammar, grammar_unrank
from .errors import ParseError, ResourceLimitError

QLANG_ALPHABET = Alphabet.from_string("x0123456789()+%=>!&|")

QLANG_GRAMMAR = Grammar(
    QLANG_ALPHABET,
    "bexp",
    {
        "bexp": (
            ("!", "bexp"),
            ("(", "bexp", "&", "bexp", ")"),
            ("(", "bexp", "|", "bexp", ")"),
            ("(", "aexp", "cmp", "aexp", ")"),
        ),
        "cmp": (("=",), (">",)),
        "aexp": (
            ("x",),
            ("numeral",),
            ("(", "aexp", "+", "aexp", ")"),
            ("(", "aexp", "%", "aexp", ")"),
        ),
        "numeral": (("0",), ("positive",)),
        "positive": (("nonzero",), ("nonzero", "digits")),
        "digits": (("digit",), ("digit", "digits")),
        "nonzero": tuple((d,) for d in "123456789"),
        "digit": tuple((d,) for d in "0123456789"),
    },
)


# -- abstract syntax -------------------------------------------------------

@dataclass(frozen=True)
class X:
    pass

@dataclass(frozen=True)
class Num:
    value: int

@dataclass(frozen=True)
class Add:
    left: object
    right: object

@dataclass(frozen=True)
class Mod:
    left: object
    right: object

@dataclass(frozen=True)
class Not:
    arg: object

@dataclass(frozen=True)
class And:
    left: object
    right: object

@dataclass(frozen=True)
class Or:
    left: object
    right: object

@dataclass(frozen=True)
class Eq:
    left: object
    right: object

@dataclass(frozen=True)
class Gt:
    left: object
    right: object


@dataclass(frozen=True)
class QProgram:
    source: str
    ast: object


# -- parsing ---------------------------------------------------------------

class _Fail(Exception):
    pass


class _Parser:
    """Backtracking recursive descent; records the furthest failure point."""

    def __init__(self, text: str):
        self.text = text
        self.best_pos = 0
        self.best_expected: set[str] = set()

    def fail(self, pos: int, *expected: str):
        if pos > self.best_pos:
            self.best_pos = pos
            self.best_expected = set(expected)
        elif pos == self.best_pos:
            self.best_expected.update(expected)
        raise _Fail

    def expect(self, pos: int, chars: str) -> str:
        if pos < len(self.text) and self.text[pos] in chars:
            return self.text[pos]
        self.fail(pos, *(repr(c) for c in chars))

    def bexp(self, pos: int):
        t = self.text
        if pos >= len(t):
            self.fail(pos, "'!'", "'('")
        c = t[pos]
        if c == "!":
            node, p = self.bexp(pos + 1)
            return Not(node), p
        if c == "(":
            try:
                left, p = self.bexp(pos + 1)
                op = self.expect(p, "&|")
                right, p = self.bexp(p + 1)
                self.expect(p, ")")
                return (And if op == "&" else Or)(left, right), p + 1
            except _Fail:
                pass
            left, p = self.aexp(pos + 1)
            op = self.expect(p, "=>")
            right, p = self.aexp(p + 1)
            self.expect(p, ")")
            return (Eq if op == "=" else Gt)(left, right), p + 1
        self.fail(pos, "'!'", "'('")

    def aexp(self, pos: int):
        t = self.text
        if pos >= len(t):
            self.fail(pos, "'x'", "digit", "'('")
        c = t[pos]
        if c == "x":
            return X(), pos + 1
        if c.isdigit():
            end = pos + 1
            while end < len(t) and t[end].isdigit():
                end += 1
            if t[pos] == "0" and end - pos > 1:
                self.fail(pos, "numeral without a leading zero")
            return Num(int(t[pos:end])), end
        if c == "(":
            left, p = self.aexp(pos + 1)
            op = self.expect(p, "+%")
            right, p = self.aexp(p + 1)
            self.expect(p, ")")
            return (Add if op == "+" else Mod)(left, right), p + 1
        self.fail(pos, "'x'", "digit", "'('")


def parse(text: str) -> QProgram:
    """Parse a program; accepts exactly the words of the Q-lang grammar."""
    parser = _Parser(text)
    try:
        ast, end = parser.bexp(0)
        if end != len(text):
            parser.fail(end, "end of input")
    except _Fail:
        raise ParseError(parser.best_pos, tuple(sorted(parser.best_expected))) from None
    return QProgram(text, ast)


def pretty(ast) -> str:
    """Canonical (fully parenthesized) source for an expression tree."""
    if isinstance(ast, X):
        return "x"
    if isinstance(ast, Num):
        return str(ast.value)
    if isinstance(ast, Add):
        return f"({pretty(ast.left)}+{pretty(ast.right)})"
    if isinstance(ast, Mod):
        return f"({pretty(ast.left)}%{pretty(ast.right)})"
    if isinstance(ast, Not):
        return f"!{pretty(ast.arg)}"
    if isinstance(ast, And):
        return f"({pretty(ast.left)}&{pretty(ast.right)})"
    if isinstance(ast, Or):
        return f"({pretty(ast.left)}|{pretty(ast.right)})"
    if isinstance(ast, Eq):
        return f"({pretty(ast.left)}={pretty(ast.right)})"
    if isinstance(ast, Gt):
        return f"({pretty(ast.left)}>{pretty(ast.right)})"
    raise TypeError(f"not a Q-lang node: {ast!r}")


# -- evaluation ------------------------------------------------------------

def _aeval(node, x: int) -> int:
    if isinstance(node, X):
        return x
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Add):
        return _aeval(node.left, x) + _aeval(node.right, x)
    # Mod; a % 0 = 0 keeps evaluation total
    divisor = _aeval(node.right, x)
    return _aeval(node.left, x) % divisor if divisor else 0


def _beval(node, x: int) -> bool:
    if isinstance(node, Not):
        return not _beval(node.arg, x)
    if isinstance(node, And):
        return _beval(node.left, x) and _beval(node.right, x)
    if isinstance(node, Or):
        return _beval(node.left, x) or _beval(node.right, x)
    if isinstance(node, Eq):
        return _aeval(node.left, x) == _aeval(node.right, x)
    return _aeval(node.left, x) > _aeval(node.right, x)


def evaluate(program: QProgram, x: int) -> int:
    """Run a program on a positive integer; always returns 0 or 1."""
    if x < 1:
        raise ValueError("inputs are positive integers")
    return 1 if _beval(program.ast, x) else 0


# -- the enumerated program list ------------------------------------------

@functools.lru_cache(maxsize=None)
def nth_program(i: int) -> QProgram:
    """The i-th valid program (1-based) in length-then-lex order."""
    if i < 1:
        raise ValueError("program indices start at 1")
    return parse(grammar_unrank(QLANG_GRAMMAR, i - 1))


@dataclass(frozen=True)
class BitTable:
    rows: int
    cols: int
    cells: tuple  # cells[i-1][x-1] = output of program i on input x

    def cell(self, i: int, x: int) -> int:
        if not 1 <= i <= self.rows:
            raise ValueError(f"program index {i} outside 1..{self.rows}")
        if not 1 <= x <= self.cols:
            raise ValueError(f"input {x} outside 1..{self.cols}")
        return self.cells[i - 1][x - 1]


def table(n: int, m: int, max_cells: int = 1_000_000) -> BitTable:
    """The n-by-m table of program outputs: row i is program i on inputs 1..m."""
    if n < 1 or m < 1:
        raise ValueError("table dimensions must be >= 1")
    if n * m > max_cells:
        raise ResourceLimitError(f"table of {n * m} cells exceeds the budget of {max_cells}")
    return BitTable(
        rows=n,
        cols=m,
        cells=tuple(
            tuple(evaluate(nth_program(i), x) for x in range(1, m + 1))
            for i in range(1, n + 1)
        ),
    )


def diagonal(n: int, max_cells: int = 1_000_000) -> list[int]:
    """[program 1 on input 1, ..., program n on input n]."""
    if n < 1:
        raise ValueError("diagonal length must be >= 1")
    if n > max_cells:
        raise ResourceLimitError(f"diagonal of {n} cells exceeds the budget of {max_cells}")
    return [evaluate(nth_program(i), i) for i in range(1, n + 1)]


def diagonal_flip(bits) -> list[int]:
    """Element-wise 1 - b; the sequence that disagrees with every table row."""
    out = []
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"not a bit: {b!r}")
        out.append(1 - b)
    return out


@functools.lru_cache(maxsize=None)
def fbar_truth(x: int) -> int:
    """The x-th flipped-diagonal bit: 1 - (program x on input x)."""
    if x < 1:
        raise ValueError("inputs are positive integers")
    return 1 - evaluate(nth_program(x), x)
