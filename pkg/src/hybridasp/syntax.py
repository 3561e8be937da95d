"""Concrete syntax: `.hasp` programs, `.init` initial conditions, `.facts`
interpretations and the layer trace format.

Program grammar::

    program  := header? rule*
    header   := "#delta_t" RATIONAL "."
    rule     := literal ":-" block (";" block)* ":" "cs" call "," ("adv"|"bool") call "."
    block    := (bodylit ("," bodylit)*)?
    bodylit  := "not" literal | literal
    literal  := "-"? IDENT
    call     := IDENT ("(" arg ("," arg)* ")")?
    arg      := INT | RATIONAL | IDENT | "{" arg ("," arg)* "}"

``%`` starts a comment running to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .model import (
    RESERVED,
    AdvancingAlgorithmRef,
    AdvancingRule,
    Block,
    BooleanAlgorithmRef,
    ConstraintSetRef,
    Fact,
    InitialCondition,
    Literal,
    Position,
    Program,
    StationaryRule,
    format_value,
    sorted_facts,
)
from .registry import Registry, RegistryError, default_registry


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int
    length: int = 1

    def __post_init__(self):
        if self.line < 1 or self.column < 1:
            raise ValueError("spans are 1-based")

    def __str__(self):
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class ParseError:
    span: SourceSpan
    message: str
    expected: str = ""

    def __str__(self):
        tail = f" (expected {self.expected})" if self.expected else ""
        return f"{self.span}: {self.message}{tail}"


class SyntaxErrors(Exception):
    """Raised by the parsers; carries every error found."""

    def __init__(self, errors: list[ParseError]):
        assert errors
        self.errors = list(errors)
        super().__init__("\n".join(str(e) for e in self.errors))


# ---------------------------------------------------------------------------
# lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<header>\#delta_t)
  | (?P<number>-?[0-9]+(?:/[0-9]+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>:-|[:;,.(){}\-])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident, number, header, punct, eof
    text: str
    line: int
    column: int

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.text)


def _tokenize(text: str, file: str, errors: list[ParseError]) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            errors.append(ParseError(SourceSpan(file, line, col), f"unexpected character {text[pos]!r}"))
            pos += 1
            continue
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    col = pos - line_start + 1
    tokens.append(Token("eof", "", line, col))
    return tokens


def _number(text: str):
    if "/" in text:
        p, q = text.split("/")
        if int(q) == 0:
            raise ValueError("zero denominator")
        v = Fraction(int(p), int(q))
        return v.numerator if v.denominator == 1 else v
    return int(text)


# ---------------------------------------------------------------------------
# program parser


class _Bail(Exception):
    pass


class _Parser:
    def __init__(self, text: str, file: str, registry: Optional[Registry]):
        self.file = file
        self.errors: list[ParseError] = []
        self.toks = _tokenize(text, file, self.errors)
        self.i = 0
        self.registry = registry

    # helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def span(self, tok: Token) -> SourceSpan:
        return SourceSpan(self.file, tok.line, tok.column, max(1, len(tok.text)))

    def fail(self, message: str, expected: str = "", tok: Token | None = None):
        tok = tok or self.tok
        self.errors.append(ParseError(self.span(tok), message, expected))
        raise _Bail

    def at(self, text: str) -> bool:
        return self.tok.kind in ("punct", "ident", "header") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"unexpected {self.tok.describe()}", repr(text))
        t = self.tok
        self.i += 1
        return t

    def recover(self):
        # skip past the next statement terminator
        while self.tok.kind != "eof" and not self.at("."):
            self.i += 1
        if self.at("."):
            self.i += 1

    # grammar
    def program(self):
        delta_t = None
        header_tok = None
        rules = []
        seen_rule = False
        while self.tok.kind != "eof":
            start = self.tok
            try:
                if self.tok.kind == "header":
                    self.i += 1
                    value = self.rational()
                    self.expect(".")
                    # the statement is complete here, so report without bailing
                    problem = None
                    if header_tok is not None:
                        problem = "duplicate #delta_t header"
                    elif seen_rule:
                        problem = "#delta_t must precede the rules"
                    elif value <= 0:
                        problem = "delta_t must be positive"
                    if problem:
                        self.errors.append(ParseError(self.span(start), problem))
                    else:
                        header_tok, delta_t = start, value
                else:
                    rules.append((start, self.rule()))
                    seen_rule = True
            except _Bail:
                self.recover()
        registry = self.registry
        if registry is None:
            registry = default_registry(1 if delta_t is None else delta_t)
        elif delta_t is not None and Fraction(delta_t) != registry.delta_t:
            registry = Registry(delta_t, registry.context.max_denominator)
        for start, (r, cs_tok, alg_tok) in rules:
            self.check_rule(registry, r, start, cs_tok, alg_tok)
        if self.errors:
            raise SyntaxErrors(sorted(self.errors, key=lambda e: (e.span.line, e.span.column)))
        return Program([r for _, (r, _, _) in rules], registry)

    def check_rule(self, registry, r, start, cs_tok, alg_tok):
        alg = r.adv if r.is_advancing else r.bool
        ok = True
        for ref, tok in ((r.cs, cs_tok), (alg, alg_tok)):
            try:
                registry.validate(ref)
            except RegistryError as e:
                self.errors.append(ParseError(self.span(tok), str(e)))
                ok = False
        if ok and registry.arity(r.cs) != r.arity:
            self.errors.append(
                ParseError(
                    self.span(start),
                    f"rule has {r.arity} block(s) but {r.cs} has arity {registry.arity(r.cs)}",
                )
            )

    def rational(self):
        if self.tok.kind != "number":
            self.fail(f"unexpected {self.tok.describe()}", "a number")
        t = self.tok
        self.i += 1
        try:
            return _number(t.text)
        except ValueError as e:
            self.fail(str(e), tok=t)

    def literal(self) -> Literal:
        neg = False
        if self.at("-"):
            neg = True
            self.i += 1
        t = self.tok
        if t.kind != "ident":
            self.fail(f"unexpected {t.describe()}", "a literal")
        if t.text in RESERVED:
            self.fail(f"{t.text!r} is a keyword and cannot name an atom", tok=t)
        self.i += 1
        try:
            return Literal(t.text, neg)
        except ValueError as e:
            self.fail(str(e), tok=t)

    def block(self) -> Block:
        pos, neg = [], []
        if self.at(";") or self.at(":"):
            return Block()
        while True:
            if self.at("not"):
                self.i += 1
                neg.append(self.literal())
            else:
                pos.append(self.literal())
            if not self.at(","):
                return Block(tuple(pos), tuple(neg))
            self.i += 1

    def arg(self):
        t = self.tok
        if t.kind == "number":
            return self.rational()
        if t.kind == "ident":
            self.i += 1
            return t.text
        if self.at("{"):
            self.i += 1
            items = [self.arg()]
            while self.at(","):
                self.i += 1
                items.append(self.arg())
            self.expect("}")
            if any(isinstance(x, frozenset) for x in items):
                self.fail("sets cannot be nested", tok=t)
            return frozenset(items)
        self.fail(f"unexpected {t.describe()}", "an argument")

    def call(self, cls):
        t = self.tok
        if t.kind != "ident":
            self.fail(f"unexpected {t.describe()}", "an algorithm name")
        self.i += 1
        args = []
        if self.at("("):
            self.i += 1
            args.append(self.arg())
            while self.at(","):
                self.i += 1
                args.append(self.arg())
            self.expect(")")
        return cls(t.text, tuple(args)), t

    def rule(self):
        head = self.literal()
        self.expect(":-")
        blocks = [self.block()]
        while self.at(";"):
            self.i += 1
            blocks.append(self.block())
        self.expect(":")
        self.expect("cs")
        cs, cs_tok = self.call(ConstraintSetRef)
        self.expect(",")
        if self.at("adv"):
            self.i += 1
            alg, alg_tok = self.call(AdvancingAlgorithmRef)
            r = AdvancingRule(head, tuple(blocks), cs, alg)
        elif self.at("bool"):
            self.i += 1
            alg, alg_tok = self.call(BooleanAlgorithmRef)
            r = StationaryRule(head, tuple(blocks), cs, alg)
        else:
            self.fail(f"unexpected {self.tok.describe()}", "'adv' or 'bool'")
        self.expect(".")
        return r, cs_tok, alg_tok


def parse_program(text: str, file: str = "<program>", registry: Registry | None = None) -> Program:
    """Parse program text; raises :class:`SyntaxErrors` listing every problem."""
    return _Parser(text, file, registry).program()


def serialize_program(P: Program) -> str:
    lines = []
    if P.delta_t != 1:
        lines.append(f"#delta_t {format_value(P.delta_t)}.")
    lines.extend(sorted(str(r) for r in P.rules))
    return "".join(line + "\n" for line in lines)


# ---------------------------------------------------------------------------
# positions, initial conditions, interpretations

_ASSIGN_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)=(\S+)\Z")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_NUMBER_RE = re.compile(r"-?[0-9]+(?:/[0-9]+)?\Z")


def _strip_comment(line: str) -> str:
    return line.split("%", 1)[0].strip()


def _parse_position(words: list[str], file: str, lineno: int, col: int) -> Position:
    def err(msg, w=""):
        raise SyntaxErrors([ParseError(SourceSpan(file, lineno, col, max(1, len(w))), msg)])

    if not words:
        err("missing step=<INT>", "")
    step = None
    params = {}
    for w in words:
        m = _ASSIGN_RE.match(w)
        if not m:
            err(f"malformed assignment {w!r}", w)
        name, raw = m.groups()
        if _NUMBER_RE.match(raw):
            try:
                value = _number(raw)
            except ValueError:
                err(f"malformed value {raw!r}", w)
        elif _IDENT_RE.match(raw):
            value = raw
        else:
            err(f"malformed value {raw!r}", w)
        if name == "step":
            if step is not None:
                err("step given twice", w)
            if not isinstance(value, int):
                err(f"step must be an integer, got {raw!r}", w)
            if value < 0:
                err(f"negative step {value}", w)
            step = value
        else:
            if name in params:
                err(f"parameter {name!r} given twice", w)
            params[name] = value
    if step is None:
        err("missing step=<INT>")
    return Position(step, tuple(params.items()))


def parse_init(text: str, file: str = "<init>") -> InitialCondition:
    positions = set()
    errors = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line:
            continue
        col = len(raw) - len(raw.lstrip()) + 1
        words = line.split()
        if words[0] != "gp":
            errors.append(ParseError(SourceSpan(file, lineno, col, len(words[0])), f"unexpected {words[0]!r}", "'gp'"))
            continue
        try:
            positions.add(_parse_position(words[1:], file, lineno, col))
        except SyntaxErrors as e:
            errors.extend(e.errors)
    if errors:
        raise SyntaxErrors(errors)
    return InitialCondition(frozenset(positions))


def serialize_init(J) -> str:
    positions = J.positions if isinstance(J, InitialCondition) else frozenset(J)
    return "".join(f"gp {p}\n" for p in sorted(positions))


def serialize_interpretation(M: Iterable[Fact]) -> str:
    return "".join(f"fact {f}\n" for f in sorted_facts(M))


def parse_interpretation(text: str, file: str = "<facts>") -> frozenset[Fact]:
    facts = set()
    errors = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line:
            continue
        col = len(raw) - len(raw.lstrip()) + 1
        words = line.split()
        try:
            if len(words) < 4 or words[0] != "fact" or words[2] != "@":
                raise SyntaxErrors(
                    [ParseError(SourceSpan(file, lineno, col, len(line)), "malformed fact line", "'fact <literal> @ step=<k> ...'")]
                )
            try:
                literal = Literal.parse(words[1])
            except ValueError as e:
                raise SyntaxErrors([ParseError(SourceSpan(file, lineno, col, len(words[1])), str(e))]) from None
            facts.add(Fact(literal, _parse_position(words[3:], file, lineno, col)))
        except SyntaxErrors as e:
            errors.extend(e.errors)
    if errors:
        raise SyntaxErrors(errors)
    return frozenset(facts)


# ---------------------------------------------------------------------------
# traces


def serialize_trace(layers) -> str:
    out = []
    for tr in layers:
        out.append(f"layer {tr.k}")
        out.append("  positions: " + ("; ".join(str(z) for z in tr.positions) or "none"))
        chosen = dict(tr.chosen)
        for z, prog in tr.programs:
            out.append(f"  at {z}")
            out.append(f"    program: {prog or '(empty)'}")
            pick = chosen[z]
            shown = "none" if pick is None else "{" + ", ".join(sorted(str(x) for x in pick)) + "}"
            out.append(f"    answer set: {shown}")
        if tr.failed:
            out.append("  no answer set at some position")
        out.append(f"  facts: {len(tr.facts)}")
        out.extend(f"    fact {f}" for f in sorted_facts(tr.facts))
    return "".join(line + "\n" for line in out)
