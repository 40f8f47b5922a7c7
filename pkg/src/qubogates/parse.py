"""Text grammar for constraints.

Three statement shapes are accepted:

  equations      z = x + y + 1        (integer coefficients, products via *)
  inequalities   x + y + z <= 2       (unit-coefficient sums against an integer)
  Boolean ops    k = i XOR j          (word operations infix, NOT prefix)
                 k = A(i, j)          (unnamed columns by letter, call syntax)

Errors carry line and column.  Parsing produces either polynomials or an
operation application; compile_constraint turns any of them into a
verified penalty.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .boolops import BoolOp, arity
from .errors import ParseError
from .pbf import Poly, Var, VarKind
from .penalty import (
    Penalty,
    compile_inequality,
    equation_to_penalty,
    op_penalty,
)

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op><=|>=|[+\-*=(),]))"
)

_WORD_OPS = {
    "AND": BoolOp.AND,
    "OR": BoolOp.OR,
    "XOR": BoolOp.XOR,
    "IMPLIES": BoolOp.IMPLIES,
    "EQUIV": BoolOp.EQUIV,
}
_CALL_OPS = {
    **_WORD_OPS,
    "NOT": BoolOp.NOT,
    "COPY": BoolOp.COPY,
    "A": BoolOp.A,
    "B": BoolOp.B,
    "C": BoolOp.C,
    "D": BoolOp.D,
    "E": BoolOp.E,
    "CONST0": BoolOp.CONST0,
    "CONST1": BoolOp.CONST1,
}


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", or the operator text
    text: str
    column: int


def _tokenize(text: str, line: int = 1) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            col = pos + (len(text[pos:]) - len(stripped)) + 1
            raise ParseError(f"unexpected character {stripped[0]!r}", line=line, column=col)
        if m.group("int") is not None:
            tokens.append(Token("int", m.group("int"), m.start("int") + 1))
        elif m.group("name") is not None:
            tokens.append(Token("name", m.group("name"), m.start("name") + 1))
        else:
            tokens.append(Token(m.group("op"), m.group("op"), m.start("op") + 1))
        pos = m.end()
    return tokens


@dataclass(frozen=True)
class OpApplication:
    op: BoolOp
    output: str
    inputs: tuple[str, ...]


@dataclass(frozen=True)
class ParsedEquation:
    lhs: Poly
    rhs: Poly


@dataclass(frozen=True)
class ParsedInequality:
    variables: tuple[str, ...]
    sense: str
    bound: int


Parsed = OpApplication | ParsedEquation | ParsedInequality


class _Parser:
    def __init__(self, tokens: list[Token], line: int):
        self.tokens = tokens
        self.line = line
        self.pos = 0

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of statement", line=self.line)
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.take()
        if tok.kind != kind:
            raise ParseError(
                f"expected {kind!r}, got {tok.text!r}", line=self.line, column=tok.column
            )
        return tok

    def fail(self, message: str) -> ParseError:
        tok = self.peek()
        col = tok.column if tok else None
        return ParseError(message, line=self.line, column=col)

    # expr := [sign] term ((+|-) term)*
    def parse_expr(self) -> Poly:
        total = Poly.zero()
        sign = 1
        tok = self.peek()
        if tok is not None and tok.kind in ("+", "-"):
            self.take()
            sign = -1 if tok.kind == "-" else 1
        total = total + self.parse_term() * sign
        while True:
            tok = self.peek()
            if tok is None or tok.kind not in ("+", "-"):
                return total
            self.take()
            sign = -1 if tok.kind == "-" else 1
            total = total + self.parse_term() * sign

    # term := factor (* factor)*
    def parse_term(self) -> Poly:
        total = self.parse_factor()
        while True:
            tok = self.peek()
            if tok is None or tok.kind != "*":
                return total
            self.take()
            total = total * self.parse_factor()

    def parse_factor(self) -> Poly:
        tok = self.take()
        if tok.kind == "int":
            return Poly.constant(Fraction(int(tok.text)))
        if tok.kind == "name":
            return Poly.variable(Var(tok.text, VarKind.INPUT))
        raise ParseError(
            f"expected a number or variable, got {tok.text!r}",
            line=self.line,
            column=tok.column,
        )


def _parse_bool_rhs(parser: _Parser, output: str) -> OpApplication | None:
    """Recognize `NAME OP NAME`, `NOT NAME`, or `OP(args)` after the `=`."""
    toks = parser.tokens[parser.pos :]
    if not toks:
        return None
    if toks[0].kind == "name" and toks[0].text.upper() == "NOT" and len(toks) == 2 and toks[1].kind == "name":
        return OpApplication(BoolOp.NOT, output, (toks[1].text,))
    if (
        len(toks) == 3
        and toks[0].kind == "name"
        and toks[1].kind == "name"
        and toks[2].kind == "name"
        and toks[1].text.upper() in _WORD_OPS
    ):
        return OpApplication(
            _WORD_OPS[toks[1].text.upper()], output, (toks[0].text, toks[2].text)
        )
    if (
        len(toks) >= 3
        and toks[0].kind == "name"
        and toks[0].text in _CALL_OPS
        and toks[1].kind == "("
    ):
        op = _CALL_OPS[toks[0].text]
        args: list[str] = []
        pos = 2
        if toks[pos].kind == ")":
            pos += 1
        else:
            while True:
                if toks[pos].kind != "name":
                    raise ParseError(
                        f"expected a variable, got {toks[pos].text!r}",
                        line=parser.line,
                        column=toks[pos].column,
                    )
                args.append(toks[pos].text)
                pos += 1
                if toks[pos].kind == ")":
                    pos += 1
                    break
                if toks[pos].kind != ",":
                    raise ParseError(
                        f"expected , or ) in argument list, got {toks[pos].text!r}",
                        line=parser.line,
                        column=toks[pos].column,
                    )
                pos += 1
        if pos != len(toks):
            raise ParseError(
                "trailing input after operation call",
                line=parser.line,
                column=toks[pos].column,
            )
        if len(args) != arity(op):
            raise ParseError(
                f"{op.value} takes {arity(op)} inputs, got {len(args)}", line=parser.line
            )
        return OpApplication(op, output, tuple(args))
    return None


def parse_constraint(text: str, line: int = 1) -> Parsed:
    """Parse one constraint statement."""
    tokens = _tokenize(text, line)
    if not tokens:
        raise ParseError("empty constraint", line=line)
    kinds = [t.kind for t in tokens]
    if "<=" in kinds or ">=" in kinds:
        cut = kinds.index("<=") if "<=" in kinds else kinds.index(">=")
        sense = tokens[cut].kind
        names: list[str] = []
        expect_name = True
        for tok in tokens[:cut]:
            if expect_name:
                if tok.kind != "name":
                    raise ParseError(
                        "inequality left side must be a sum of variables",
                        line=line,
                        column=tok.column,
                    )
                names.append(tok.text)
                expect_name = False
            else:
                if tok.kind != "+":
                    raise ParseError(
                        "inequality left side must be a sum of variables",
                        line=line,
                        column=tok.column,
                    )
                expect_name = True
        if expect_name or not names:
            raise ParseError("inequality left side must be a sum of variables", line=line)
        rest = tokens[cut + 1 :]
        sign = 1
        if rest and rest[0].kind == "-":
            sign = -1
            rest = rest[1:]
        if len(rest) != 1 or rest[0].kind != "int":
            raise ParseError("inequality bound must be an integer", line=line)
        if len(set(names)) != len(names):
            raise ParseError("inequality repeats a variable", line=line)
        return ParsedInequality(tuple(names), sense, sign * int(rest[0].text))

    if "=" not in kinds:
        raise ParseError("constraint needs =, <=, or >=", line=line)
    eq_at = kinds.index("=")
    parser = _Parser(tokens, line)

    if eq_at == 1 and tokens[0].kind == "name":
        parser.pos = 2
        app = _parse_bool_rhs(parser, tokens[0].text)
        if app is not None:
            if tokens[0].text in app.inputs:
                raise ParseError(
                    f"output {tokens[0].text!r} reused as an input", line=line
                )
            return app

    parser.pos = 0
    lhs = parser.parse_expr()
    parser.expect("=")
    rhs = parser.parse_expr()
    if parser.peek() is not None:
        raise ParseError(
            f"trailing input {parser.peek().text!r}",
            line=line,
            column=parser.peek().column,
        )
    return ParsedEquation(lhs, rhs)


def compile_constraint(text: str, *, slack_mode: str = "full") -> Penalty:
    """Parse and compile one constraint into a verified penalty."""
    parsed = parse_constraint(text)
    if isinstance(parsed, OpApplication):
        out = Var(parsed.output, VarKind.OUTPUT)
        ins = tuple(Var(name, VarKind.INPUT) for name in parsed.inputs)
        pen = op_penalty(parsed.op, out, ins)
        return Penalty(
            poly=pen.poly,
            valid_set=pen.valid_set,
            valid_value=pen.valid_value,
            dropped_offset=pen.dropped_offset,
            ancillas=pen.ancillas,
            satisfiable=pen.satisfiable,
            provenance=text.strip(),
        )
    if isinstance(parsed, ParsedInequality):
        vs = tuple(Var(name, VarKind.INPUT) for name in parsed.variables)
        return compile_inequality(
            vs, parsed.sense, parsed.bound, mode=slack_mode, provenance=text.strip()
        )
    return equation_to_penalty(parsed.lhs, parsed.rhs, provenance=text.strip())
