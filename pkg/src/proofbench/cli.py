"""Command-line front end for the workbench.

Subcommands follow the pipeline the library implements:

    enumerate / rank / unrank     shortlex string enumeration over an alphabet
    qlang eval|nth|table|diagonal|fbar
                                  the toy total language and its diagonal
    check FILE.drv                mechanical derivation checking
    search / decide / gap / audit budgeted proof search and the static decider
    demo incompleteness           the whole story on one screen

Exit codes are a stable contract: 0 success or verdict reached, 1 domain
error (including checker Reject), 2 search Exhausted, 64 usage error.

Output is deterministic given the arguments and config: no timestamps, no
machine identifiers, no environment lookups.  Reporting subcommands take
``--format pretty|csv|json-lines``; json-lines prints one JSON object per
line with keys sorted, csv uses a header row, pretty prints ``key: value``
pairs.  A ``--config PATH`` file (``key = value`` lines, ``#`` comments)
supplies defaults; keys and their defaults:

    alphabet = binary             default alphabet name for enumerate/rank/unrank
    format = pretty               default output format
    count_table_entries = 1000000 memo budget for grammar counting
    table_cells = 1000000         cell budget for program/input tables
    bucket_words = 500000         per-length materialization cap for unranking
    search_candidates = 100000    default search budget (candidates)

Alphabets are named (``binary``, ``qlang``) or loaded from a file with one
single-codepoint symbol per line, order significant.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import qlang
from .enumerator import Alphabet, GrammarError, grammar_count, rank, stream, unrank
from .errors import ParseError, ResourceLimitError
from .pi_system import (
    Accept,
    FbarAtom,
    check_derivation,
    derivation_file_text,
    make_axiom_pack,
    negate_fbar,
    parse_derivation_file,
    parse_statement,
    pretty_statement,
)
from .proof_search import (
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

FORMATS = ("pretty", "csv", "json-lines")

BUILTIN_ALPHABETS = {
    "binary": Alphabet.from_string("01"),
    "qlang": qlang.QLANG_ALPHABET,
}


@dataclass(frozen=True)
class GlobalConfig:
    alphabet: str = "binary"
    format: str = "pretty"
    count_table_entries: int = 1_000_000
    table_cells: int = 1_000_000
    bucket_words: int = 500_000
    search_candidates: int = 100_000

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}")
        for name in ("count_table_entries", "table_cells", "bucket_words", "search_candidates"):
            if getattr(self, name) < 1:
                raise ValueError(f"budget {name} must be positive")

    @classmethod
    def from_text(cls, text: str) -> "GlobalConfig":
        values: dict = {}
        known = {f.name: f.type for f in fields(cls)}
        for lineno, raw in enumerate(text.split("\n"), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or not key or not value:
                raise ValueError(f"config line {lineno}: expected 'key = value'")
            if key not in known:
                raise ValueError(f"config line {lineno}: unknown key {key!r}")
            if key in ("alphabet", "format"):
                values[key] = value
            else:
                try:
                    values[key] = int(value)
                except ValueError:
                    raise ValueError(f"config line {lineno}: {key} needs an integer") from None
        return cls(**values)

    def to_text(self) -> str:
        return "".join(f"{f.name} = {getattr(self, f.name)}\n" for f in fields(self))


def _resolve_alphabet(name: str) -> Alphabet:
    if name in BUILTIN_ALPHABETS:
        return BUILTIN_ALPHABETS[name]
    path = Path(name)
    if path.exists():
        symbols = []
        for raw in path.read_text(encoding="utf-8").split("\n")[:-1] or [""]:
            line = raw
            if len(line) != 1:
                raise ValueError(f"alphabet file {name}: each line must hold one symbol")
            symbols.append(line)
        return Alphabet(tuple(symbols))
    raise ValueError(f"unknown alphabet {name!r} (not a builtin name or readable file)")


def emit_report(rows: list, fmt: str) -> str:
    """Render records in a stable order; empty input renders empty output."""
    if fmt == "json-lines":
        return "".join(json.dumps(row, sort_keys=True) + "\n" for row in rows)
    if fmt == "csv":
        if not rows:
            return ""
        out = io.StringIO()
        writer = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return out.getvalue()
    return "".join(", ".join(f"{k}: {v}" for k, v in row.items()) + "\n" for row in rows)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(64, f"{self.prog}: error: {message}\n")


def _add_format(sub):
    sub.add_argument("--format", choices=FORMATS, default=None, help="output format")


def build_parser() -> _Parser:
    top = _Parser(prog="proofbench", description="shortlex enumeration, a toy total language, and a checkable derivation system")
    top.add_argument("--config", metavar="PATH", default=None, help="key = value config file")
    commands = top.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = commands.add_parser("enumerate", help="list strings in shortlex order")
    p.add_argument("--alphabet", default=None, help="builtin name or symbol file")
    p.add_argument("--from", dest="start", type=int, default=0, help="first rank (default 0)")
    p.add_argument("--count", type=int, required=True, help="how many strings")
    _add_format(p)

    p = commands.add_parser("rank", help="position of a string in shortlex order")
    p.add_argument("string", help="the string to rank")
    p.add_argument("--alphabet", default=None)
    _add_format(p)

    p = commands.add_parser("unrank", help="string at a shortlex position")
    p.add_argument("k", type=int, help="the rank")
    p.add_argument("--alphabet", default=None)
    _add_format(p)

    p = commands.add_parser("qlang", help="the toy total language")
    qcommands = p.add_subparsers(dest="qcommand", required=True, metavar="ACTION")
    q = qcommands.add_parser("eval", help="run a program on an input")
    q.add_argument("source", help="program file, or - for standard input")
    q.add_argument("--x", type=int, required=True, help="input value (positive)")
    _add_format(q)
    q = qcommands.add_parser("nth", help="the i-th program in enumeration order")
    q.add_argument("i", type=int)
    _add_format(q)
    q = qcommands.add_parser("table", help="program/input bit table")
    q.add_argument("--rows", type=int, required=True)
    q.add_argument("--cols", type=int, required=True)
    _add_format(q)
    q = qcommands.add_parser("diagonal", help="diagonal bits of the table")
    q.add_argument("--n", type=int, required=True)
    _add_format(q)
    q = qcommands.add_parser("fbar", help="flipped-diagonal bits")
    q.add_argument("--n", type=int, required=True)
    _add_format(q)

    p = commands.add_parser("check", help="check a derivation file")
    p.add_argument("file", help="derivation file path")
    p.add_argument("--pack", type=int, default=0, help="fbar axiom pack size (default 0)")

    p = commands.add_parser("search", help="budgeted derivation search")
    p.add_argument("statement", help="target statement")
    p.add_argument("--pack", type=int, default=0)
    p.add_argument("--budget", type=int, default=None, help="candidate budget (default from config)")
    p.add_argument("--mode", choices=[m.value for m in SearchMode], default="structured")
    p.add_argument("--emit-derivation", metavar="PATH", default=None, help="write the found derivation file")
    _add_format(p)

    p = commands.add_parser("decide", help="static derivability of an fbar statement")
    p.add_argument("statement")
    p.add_argument("--pack", type=int, default=0)
    _add_format(p)

    p = commands.add_parser("gap", help="indices where neither fbar bit is derivable")
    p.add_argument("--pack", type=int, required=True)
    p.add_argument("--xmax", type=int, required=True)
    _add_format(p)

    p = commands.add_parser("audit", help="sweep the decider for violations")
    p.add_argument("which", choices=("soundness", "consistency"))
    p.add_argument("--pack", type=int, required=True)
    p.add_argument("--xmax", type=int, default=None)
    _add_format(p)

    p = commands.add_parser("demo", help="guided walkthroughs")
    dcommands = p.add_subparsers(dest="dcommand", required=True, metavar="TOPIC")
    d = dcommands.add_parser("incompleteness", help="the completeness gap, end to end")
    d.add_argument("--pack", type=int, required=True)
    d.add_argument("--xmax", type=int, required=True)

    return top


def _fmt(args, cfg: GlobalConfig) -> str:
    value = getattr(args, "format", None)
    return value if value is not None else cfg.format


def _write(text: str):
    sys.stdout.write(text)


# -- subcommand handlers -------------------------------------------------------

def _cmd_enumerate(args, cfg):
    alphabet = _resolve_alphabet(args.alphabet or cfg.alphabet)
    if args.count < 0 or args.start < 0:
        raise ValueError("--from and --count must be nonnegative")
    rows = [
        {"k": args.start + i, "s": s}
        for i, s in enumerate(stream(alphabet, args.start, args.count))
    ]
    _write(emit_report(rows, _fmt(args, cfg)))
    return 0


def _cmd_rank(args, cfg):
    alphabet = _resolve_alphabet(args.alphabet or cfg.alphabet)
    _write(emit_report([{"k": rank(alphabet, args.string)}], _fmt(args, cfg)))
    return 0


def _cmd_unrank(args, cfg):
    alphabet = _resolve_alphabet(args.alphabet or cfg.alphabet)
    if args.k < 0:
        raise ValueError("rank must be nonnegative")
    _write(emit_report([{"s": unrank(alphabet, args.k)}], _fmt(args, cfg)))
    return 0


def _cmd_qlang(args, cfg):
    fmt = _fmt(args, cfg)
    if args.qcommand == "eval":
        if args.source == "-":
            text = sys.stdin.read()
        else:
            text = Path(args.source).read_text(encoding="utf-8")
        program = qlang.parse(text.rstrip("\n"))
        _write(emit_report([{"x": args.x, "output": qlang.evaluate(program, args.x)}], fmt))
        return 0
    if args.qcommand == "nth":
        _write(emit_report([{"i": args.i, "program": qlang.nth_program(args.i).source}], fmt))
        return 0
    if args.qcommand == "table":
        bit_table = qlang.table(args.rows, args.cols, max_cells=cfg.table_cells)
        rows = [
            {f"x{x}": bit_table.cell(i, x) for x in range(1, args.cols + 1)}
            for i in range(1, args.rows + 1)
        ]
        if fmt == "pretty":
            _write("".join(" ".join(str(v) for v in row.values()) + "\n" for row in rows))
        else:
            _write(emit_report(rows, fmt))
        return 0
    if args.qcommand == "diagonal":
        bits = qlang.diagonal(args.n, max_cells=cfg.table_cells)
        _write(emit_report([{"i": i, "bit": b} for i, b in enumerate(bits, start=1)], fmt))
        return 0
    bits = qlang.diagonal_flip(qlang.diagonal(args.n, max_cells=cfg.table_cells))
    _write(emit_report([{"x": x, "bit": b} for x, b in enumerate(bits, start=1)], fmt))
    return 0


def _cmd_check(args, cfg):
    derivation, target = parse_derivation_file(Path(args.file).read_text(encoding="utf-8"))
    verdict = check_derivation(make_axiom_pack(args.pack), derivation, target)
    if isinstance(verdict, Accept):
        _write("Accept\n")
        return 0
    print(f"Reject: line {verdict.line}: {verdict.reason}", file=sys.stderr)
    return 1


def _cmd_search(args, cfg):
    target = parse_statement(args.statement)
    pack = make_axiom_pack(args.pack)
    budget = SearchBudget(max_candidates=args.budget if args.budget is not None else cfg.search_candidates)
    verdict = search(pack, target, budget, SearchMode(args.mode))
    if isinstance(verdict, Exhausted):
        _write(emit_report([{"verdict": "Exhausted", "candidates": verdict.candidates}], _fmt(args, cfg)))
        return 2
    derived = target if isinstance(verdict, DerivedTarget) else negate_fbar(target)
    row = {
        "verdict": type(verdict).__name__,
        "candidates": verdict.candidates,
        "statement": pretty_statement(derived),
        "lines": len(verdict.derivation.lines),
    }
    _write(emit_report([row], _fmt(args, cfg)))
    if args.emit_derivation:
        Path(args.emit_derivation).write_text(
            derivation_file_text(verdict.derivation, derived), encoding="utf-8"
        )
    return 0


def _cmd_decide(args, cfg):
    statement = parse_statement(args.statement)
    if not isinstance(statement, FbarAtom):
        raise ValueError("decide takes an fbar statement")
    decision = decide_fbar(make_axiom_pack(args.pack), statement)
    _write(emit_report([{"statement": pretty_statement(statement), "decision": decision}], _fmt(args, cfg)))
    return 0


def _cmd_gap(args, cfg):
    gap = completeness_gap(make_axiom_pack(args.pack), args.xmax)
    _write(emit_report([{"x": x} for x in gap], _fmt(args, cfg)))
    return 0


def _cmd_audit(args, cfg):
    pack = make_axiom_pack(args.pack)
    if args.which == "soundness":
        report = audit_soundness(pack)
        detail = " ".join(f"{x}:{bit}" for x, bit in report.violations)
    else:
        x_max = args.xmax if args.xmax is not None else max(pack.n, 1)
        report = audit_consistency(pack, x_max)
        detail = " ".join(str(x) for x in report.violations)
    row = {
        "kind": report.kind,
        "queries": report.queries,
        "violations": len(report.violations),
        "detail": detail,
    }
    _write(emit_report([row], _fmt(args, cfg)))
    return 0


def _cmd_demo(args, cfg):
    pack = make_axiom_pack(args.pack)
    gap = completeness_gap(pack, args.xmax)
    out = []
    out.append(f"axiom pack: fbar bits for x = 1..{pack.n}, scanning x <= {args.xmax}")
    out.append(f"completeness gap: {gap}")
    if not gap:
        out.append("every scanned index has a derivable bit; no gap to exhibit")
        _write("\n".join(out) + "\n")
        return 0
    for x in gap:
        true_bit = qlang.fbar_truth(x)
        atom = FbarAtom(x, true_bit)
        assert decide_fbar(pack, atom) == NOT_DERIVABLE
        out.append(
            f"x = {x}: {pretty_statement(atom)} is true by direct computation and "
            f"formable, yet {NOT_DERIVABLE}; so is its negation {pretty_statement(negate_fbar(atom))}"
        )
    first = gap[0]
    atom = FbarAtom(first, qlang.fbar_truth(first))
    budget = SearchBudget(max_candidates=cfg.search_candidates)
    verdict = search(pack, atom, budget, SearchMode.STRUCTURED)
    out.append(
        f"search transcript: target {pretty_statement(atom)}, structured mode, "
        f"budget {cfg.search_candidates} candidates -> {type(verdict).__name__} "
        f"after {verdict.candidates} candidates"
    )
    out.append("underivability rests on the static decider; the failed search is illustration")
    _write("\n".join(out) + "\n")
    return 0


_HANDLERS = {
    "enumerate": _cmd_enumerate,
    "rank": _cmd_rank,
    "unrank": _cmd_unrank,
    "qlang": _cmd_qlang,
    "check": _cmd_check,
    "search": _cmd_search,
    "decide": _cmd_decide,
    "gap": _cmd_gap,
    "audit": _cmd_audit,
    "demo": _cmd_demo,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = GlobalConfig.from_text(Path(args.config).read_text(encoding="utf-8")) if args.config else GlobalConfig()
    except (OSError, ValueError) as exc:
        print(f"proofbench: config error: {exc}", file=sys.stderr)
        return 64
    try:
        return _HANDLERS[args.command](args, cfg)
    except (ParseError, GrammarError, ValueError, ResourceLimitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
