"""Recursive-descent parser for rational expressions and operators.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := INT | NAME | '(' expr ')'

NAME is ``t``, ``x<k>``, ``Dt`` or ``Dx<k>``. What a name means is decided
by the algebra object passed to :func:`parse_with`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Protocol

from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|(Dt|Dx\d+|t|x\d+)|(\*\*|[-+*/^()]))")


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op", "end"
    text: str
    pos: int


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    start = text.rfind("\n", 0, pos) + 1
    return line, pos - start + 1


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            line, col = _line_col(text, pos)
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        start = m.start(1) if m.group(1) else m.start(2) if m.group(2) else m.start(3)
        if m.group(1):
            out.append(Token("int", m.group(1), start))
        elif m.group(2):
            # reject things like 'tx' or 'x1y' glued to letters
            end = m.end()
            if end < len(text) and (text[end].isalpha() or text[end] == "_"):
                line, col = _line_col(text, start)
                raise ParseError(f"unknown name starting {text[start:end + 1]!r}", line, col)
            out.append(Token("name", m.group(2), start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            out.append(Token("op", op, start))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


class Algebra(Protocol):
    def integer(self, k: int) -> Any: ...
    def name(self, name: str) -> Any: ...
    def add(self, a: Any, b: Any) -> Any: ...
    def sub(self, a: Any, b: Any) -> Any: ...
    def mul(self, a: Any, b: Any) -> Any: ...
    def div(self, a: Any, b: Any) -> Any: ...
    def neg(self, a: Any) -> Any: ...
    def power(self, a: Any, k: int) -> Any: ...


class _Parser:
    def __init__(self, text: str, algebra: Algebra) -> None:
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.alg = algebra

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tokens[self.i]
        line, col = _line_col(self.text, tok.pos)
        return ParseError(msg, line, col)

    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def wrap(self, tok: Token, fn, *args):
        try:
            return fn(*args)
        except ParseError:
            raise
        except Exception as exc:  # semantic errors get a position too
            raise self.error(str(exc), tok) from exc

    def parse(self) -> Any:
        if self.peek().kind == "end":
            raise self.error("empty input")
        value = self.expr()
        if self.peek().kind != "end":
            raise self.error(f"unexpected {self.peek().text!r}")
        return value

    def expr(self) -> Any:
        value = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            tok = self.take()
            rhs = self.term()
            op = self.alg.add if tok.text == "+" else self.alg.sub
            value = self.wrap(tok, op, value, rhs)
        return value

    def term(self) -> Any:
        value = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            tok = self.take()
            rhs = self.unary()
            op = self.alg.mul if tok.text == "*" else self.alg.div
            value = self.wrap(tok, op, value, rhs)
        return value

    def unary(self) -> Any:
        tok = self.peek()
        if tok.kind == "op" and tok.text in "+-":
            self.take()
            inner = self.unary()
            return inner if tok.text == "+" else self.wrap(tok, self.alg.neg, inner)
        return self.power()

    def power(self) -> Any:
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            tok = self.take()
            exp = self.take()
            if exp.kind != "int":
                raise self.error("exponent must be a nonnegative integer", exp)
            return self.wrap(tok, self.alg.power, base, int(exp.text))
        return base

    def atom(self) -> Any:
        tok = self.take()
        if tok.kind == "int":
            return self.alg.integer(int(tok.text))
        if tok.kind == "name":
            return self.wrap(tok, self.alg.name, tok.text)
        if tok.kind == "op" and tok.text == "(":
            value = self.expr()
            close = self.take()
            if close.kind != "op" or close.text != ")":
                raise self.error("expected ')'", close)
            return value
        if tok.kind == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected {tok.text!r}", tok)


def parse_with(text: str, algebra: Algebra) -> Any:
    return _Parser(text, algebra).parse()


def name_index(name: str) -> tuple[str, int]:
    """Map a generator name to (kind, variable index); kind is 'var' or 'der'."""
    if name == "t":
        return "var", 0
    if name == "Dt":
        return "der", 0
    if name.startswith("Dx"):
        return "der", int(name[2:])
    if name.startswith("x"):
        return "var", int(name[1:])
    raise ValueError(f"unknown generator {name!r}")


def generator_name(kind: str, v: int) -> str:
    if kind == "var":
        return "t" if v == 0 else f"x{v}"
    return "Dt" if v == 0 else f"Dx{v}"
