"""Lexer, parser, printer and static checker for SMM assembly.

One instruction per line::

    [lineno] new [label]
    [lineno] set <x><d> [[to] y]
    [lineno] ctr|center <x>
    [lineno] if <x> <y> [then] (N | +N | -N)
    [lineno] stop [message]

Paths are strings of single-character directions; ``.`` is the empty path.
``#`` starts a comment. A ``.dirs`` directive before the first instruction
replaces the default ``n s e w`` alphabet.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .graph import DEFAULT_ALPHABET, GraphError, check_alphabet

ABSOLUTE = "abs"
FORWARD = "+"
BACKWARD = "-"


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, col {column}: " if line else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Span:
    line: int
    column: int


@dataclass(frozen=True)
class JumpTarget:
    kind: str
    magnitude: int

    def __post_init__(self):
        if self.kind not in (ABSOLUTE, FORWARD, BACKWARD):
            raise ValueError(f"bad jump kind {self.kind!r}")
        if self.magnitude < 1:
            raise ValueError("jump magnitude must be >= 1")

    def resolve(self, pc: int) -> int:
        if self.kind == ABSOLUTE:
            return self.magnitude
        if self.kind == FORWARD:
            return pc + self.magnitude
        return pc - self.magnitude

    def __str__(self) -> str:
        return str(self.magnitude) if self.kind == ABSOLUTE else f"{self.kind}{self.magnitude}"


@dataclass(frozen=True)
class New:
    label: Optional[str] = None


@dataclass(frozen=True)
class Set:
    x: str
    d: str
    y: str = ""


@dataclass(frozen=True)
class Center:
    x: str


@dataclass(frozen=True)
class If:
    x: str
    y: str
    target: JumpTarget


@dataclass(frozen=True)
class Stop:
    message: str = ""


Instruction = Union[New, Set, Center, If, Stop]


@dataclass
class Program:
    """Instructions are 1-indexed in the language; ``instructions[0]`` is line 1."""

    instructions: list
    alphabet: tuple = DEFAULT_ALPHABET
    spans: list = field(default_factory=list, compare=False)

    def __len__(self) -> int:
        return len(self.instructions)

    def __getitem__(self, lineno: int) -> Instruction:
        if lineno < 1:
            raise IndexError(lineno)
        return self.instructions[lineno - 1]

    def directions(self) -> set:
        used = set()
        for ins in self.instructions:
            if isinstance(ins, Set):
                used.update(ins.x, ins.d, ins.y)
            elif isinstance(ins, Center):
                used.update(ins.x)
            elif isinstance(ins, If):
                used.update(ins.x, ins.y)
        return used


_INT = re.compile(r"\d+")
_TARGET = re.compile(r"([+-]?)(\d+)")


def _tokens(line: str) -> list:
    """Whitespace tokens with 1-based columns."""
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


class _LineParser:
    def __init__(self, alphabet, lineno: int):
        self.alphabet = alphabet
        self.lineno = lineno

    def error(self, msg, col):
        return ParseError(msg, self.lineno, col)

    def path(self, tok, col, allow_empty=True) -> str:
        if tok == ".":
            if not allow_empty:
                raise self.error("empty path not allowed here", col)
            return ""
        for k, ch in enumerate(tok):
            if ch not in self.alphabet:
                raise self.error(f"direction {ch!r} not in alphabet {''.join(self.alphabet)!r}", col + k)
        return tok

    def target(self, tok, col) -> JumpTarget:
        m = _TARGET.fullmatch(tok)
        if not m:
            raise self.error(f"malformed jump target {tok!r}", col)
        mag = int(m.group(2))
        if mag < 1:
            raise self.error(f"jump target {tok!r} must be at least 1", col)
        kind = {"": ABSOLUTE, "+": FORWARD, "-": BACKWARD}[m.group(1)]
        return JumpTarget(kind, mag)

    def instruction(self, toks, raw) -> Instruction:
        (op, opcol), args = toks[0], toks[1:]
        op = op.lower()
        if op == "new":
            if len(args) > 1:
                raise self.error("new takes at most one label", args[1][1])
            return New(args[0][0] if args else None)
        if op == "set":
            if not args:
                raise self.error("set needs a direction", opcol + len(op))
            tok, col = args[0]
            if tok == ".":
                raise self.error("set needs a direction, got empty path", col)
            xd = self.path(tok, col)
            rest = args[1:]
            if rest and rest[0][0].lower() == "to":
                rest = rest[1:]
                if not rest:
                    raise self.error("'to' without a path", args[1][1])
            if len(rest) > 1:
                raise self.error("too many operands for set", rest[1][1])
            y = self.path(*rest[0]) if rest else ""
            return Set(xd[:-1], xd[-1], y)
        if op in ("ctr", "center"):
            if len(args) != 1:
                raise self.error(f"{op} takes exactly one path", opcol)
            return Center(self.path(*args[0], allow_empty=False))
        if op == "if":
            if len(args) == 4 and args[2][0].lower() == "then":
                args = [args[0], args[1], args[3]]
            if len(args) != 3:
                raise self.error("if takes two paths and a target", opcol)
            return If(self.path(*args[0]), self.path(*args[1]), self.target(*args[2]))
        if op == "stop":
            # message is the raw remainder of the line
            return Stop(raw[opcol - 1 + len(op):].strip())
        raise self.error(f"unknown mnemonic {toks[0][0]!r}", opcol)


def parse(text: str, alphabet=None) -> Program:
    """Parse SMM source into a :class:`Program`.

    Raises :class:`ParseError` with the offending line and column.
    """
    dirs = tuple(alphabet) if alphabet is not None else DEFAULT_ALPHABET
    instructions, spans = [], []
    numbered = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        code = raw.split("#", 1)[0]
        toks = _tokens(code)
        if not toks:
            continue
        if toks[0][0] == ".dirs":
            if instructions:
                raise ParseError(".dirs must precede the first instruction", lineno, toks[0][1])
            try:
                dirs = check_alphabet(t for t, _ in toks[1:])
            except GraphError as exc:
                raise ParseError(str(exc), lineno, toks[0][1]) from None
            continue
        has_number = bool(_INT.fullmatch(toks[0][0]))
        if numbered is None:
            numbered = has_number
        elif numbered != has_number:
            raise ParseError("line numbers must be used on every instruction or none", lineno, toks[0][1])
        if has_number:
            expected = len(instructions) + 1
            if int(toks[0][0]) != expected:
                raise ParseError(f"line number {toks[0][0]} out of sequence, expected {expected}", lineno, toks[0][1])
            toks = toks[1:]
            if not toks:
                raise ParseError("line number without instruction", lineno, 1)
        instructions.append(_LineParser(dirs, lineno).instruction(toks, code))
        spans.append(Span(lineno, toks[0][1]))
    return Program(instructions, dirs, spans)


def render_instruction(ins: Instruction) -> str:
    if isinstance(ins, New):
        return "new" if ins.label is None else f"new {ins.label}"
    if isinstance(ins, Set):
        head = f"set {ins.x}{ins.d}"
        return head if not ins.y else f"{head} {ins.y}"
    if isinstance(ins, Center):
        return f"ctr {ins.x}"
    if isinstance(ins, If):
        return f"if {ins.x or '.'} {ins.y or '.'} {ins.target}"
    if isinstance(ins, Stop):
        return f"stop {ins.message}" if ins.message else "stop"
    raise TypeError(f"not an instruction: {ins!r}")


def render(program: Program) -> str:
    lines = []
    if tuple(program.alphabet) != DEFAULT_ALPHABET:
        lines.append(".dirs " + " ".join(program.alphabet))
    width = len(str(len(program)))
    for i, ins in enumerate(program.instructions, start=1):
        lines.append(f"{i:>{width}} {render_instruction(ins)}")
    return "\n".join(lines) + "\n" if lines else ""


@dataclass(frozen=True)
class Diagnostic:
    line: int
    severity: str  # "warning" | "error"
    message: str

    def __str__(self):
        return f"{self.line}: {self.severity}: {self.message}"


def _successors(program: Program, pc: int) -> list:
    """Next pcs under naive flow; targets past the end are exits (omitted)."""
    ins = program[pc]
    n = len(program)
    if isinstance(ins, Stop):
        return []
    nxt = [pc + 1]
    if isinstance(ins, If):
        nxt.append(ins.target.resolve(pc))
    return [t for t in nxt if 1 <= t <= n]


def validate(program: Program) -> list:
    """Static checks: out-of-range jumps and unreachable instructions."""
    diags = []
    n = len(program)
    for pc, ins in enumerate(program.instructions, start=1):
        if isinstance(ins, If):
            dest = ins.target.resolve(pc)
            if dest < 1:
                diags.append(Diagnostic(pc, "error", f"jump {ins.target} targets line {dest}, before line 1"))
            elif dest > n + 1:
                diags.append(Diagnostic(pc, "warning", f"jump {ins.target} targets line {dest} beyond end {n} + 1 (halts)"))
            elif dest == n + 1:
                diags.append(Diagnostic(pc, "info", f"jump {ins.target} exits past end (line {dest} of {n}): intentional halt"))
    if n:
        seen = {1}
        stack = [1]
        while stack:
            for t in _successors(program, stack.pop()):
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        for pc in range(1, n + 1):
            if pc not in seen:
                diags.append(Diagnostic(pc, "warning", "unreachable instruction"))
    return diags
