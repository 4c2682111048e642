"""Tiny arithmetic-expression evaluator shared by every text input.

Grammar (whitespace-insensitive)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' INT)?
    atom   := INT | NAME | '(' expr ')'

Integers are handed to ``coerce``; names are looked up in ``symbols``.
The evaluator never builds a syntax tree, it folds values directly, so
the same routine parses polynomials, cyclotomic literals and parameter
expressions such as ``b^2``.
"""

from __future__ import annotations

import re
from typing import Any, Callable, Mapping

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class ExpressionError(ValueError):
    """Raised on malformed input; carries the character offset."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


def _tokenize(text: str) -> list[tuple[str, Any, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else pos
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        elif m.group(3) is not None:
            if not m.group(3).isspace():
                tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, symbols, coerce):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.symbols = symbols
        self.coerce = coerce

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ExpressionError(message, self.text, tok[2])

    def expr(self):
        value = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            tok = self.peek()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                try:
                    value = value / rhs
                except ZeroDivisionError:
                    self.fail("division by zero", tok)
        return value

    def unary(self):
        if self.peek() == ("op", "-", self.peek()[2]):
            self.take()
            return -self.unary()
        if self.peek()[0] == "op" and self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "int":
                self.fail("expected a nonnegative integer exponent", tok)
            base = base ** tok[1]
        return base

    def atom(self):
        tok = self.take()
        kind, value, _ = tok
        if kind == "int":
            return self.coerce(value)
        if kind == "name":
            if value not in self.symbols:
                self.fail(f"unknown symbol {value!r}", tok)
            return self.symbols[value]
        if kind == "op" and value == "(":
            inner = self.expr()
            if self.take()[1] != ")":
                self.fail("expected ')'")
            return inner
        self.fail("unexpected token" if kind != "end" else "unexpected end of input", tok)

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            self.fail("trailing input")
        return value


def evaluate(text: str, symbols: Mapping[str, Any], coerce: Callable[[int], Any]) -> Any:
    """Evaluate ``text`` using ``symbols`` for names and ``coerce`` for integers."""
    return _Parser(text, symbols, coerce).parse()
