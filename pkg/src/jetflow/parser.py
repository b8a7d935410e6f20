"""Infix expression grammar for scalar fields.

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?          # right associative
    atom    := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

Names: ``t``, ``q1..qm``, ``v1..vm``, ``v0`` (tangent contexts only), ``pi``
and the functions sin, cos, exp, log, sqrt, atan.
"""

from __future__ import annotations

import math
import re

from .errors import ParseError, UnknownSymbol
from .expr import FUNCTIONS, Const, Q, ScalarField, T, TDOT, V, Var, n_add, n_div, n_func, \
    n_mul, n_neg, n_pow, n_sub

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)
_VAR = re.compile(r"([qv])(\d+)$")


def _tokenize(text: str):
    pos, out = 0, []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", *_linecol(text, pos))
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def _linecol(text: str, pos: int):
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str, dim: int, tangent: bool):
        self.text = text
        self.dim = dim
        self.tangent = tangent
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok, cls=ParseError):
        return cls(msg, *_linecol(self.text, tok[2]))

    def expect(self, value):
        tok = self.take()
        if tok[1] != value or tok[0] == "end":
            raise self.error(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok)

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise self.error(f"unexpected {tok[1]!r}", tok)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            node = n_add(node, rhs) if op == "+" else n_sub(node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.unary()
            node = n_mul(node, rhs) if op == "*" else n_div(node, rhs)
        return node

    def unary(self):
        if self.peek()[1] == "-" and self.peek()[0] == "op":
            self.take()
            return n_neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            return n_pow(base, self.unary())
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return Const(float(val))
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "name":
            if self.peek()[1] == "(" and self.peek()[0] == "op":
                if val not in FUNCTIONS:
                    raise self.error(f"unknown function {val!r}", tok, UnknownSymbol)
                self.take()
                arg = self.expr()
                self.expect(")")
                return n_func(val, arg)
            return self.variable(tok)
        raise self.error(f"unexpected {val or 'end of input'!r}", tok)

    def variable(self, tok):
        name = tok[1]
        if name == "t":
            return Var(T)
        if name == "pi":
            return Const(math.pi)
        m = _VAR.match(name)
        if m:
            kind, idx = m.group(1), int(m.group(2))
            if kind == "v" and idx == 0:
                if self.tangent:
                    return Var(TDOT)
            elif 1 <= idx <= self.dim:
                return Var(Q(idx - 1) if kind == "q" else V(idx - 1))
        raise self.error(f"unknown symbol {name!r} for m={self.dim}", tok, UnknownSymbol)


def parse_field(text: str, dim: int, *, tangent: bool = False) -> ScalarField:
    """Parse ``text`` into a :class:`ScalarField` of fibre dimension ``dim``.

    ``tangent=True`` admits ``v0`` (the time component of a tangent vector).
    """
    if not isinstance(text, str):
        if isinstance(text, (int, float)) and not isinstance(text, bool):
            return ScalarField.constant(float(text), dim)
        raise ParseError(f"expected an expression string, got {type(text).__name__}")
    return ScalarField(_Parser(text, dim, tangent).parse(), dim)
