"""Recursive-descent parser for the expression grammar.

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := primary ("^" unary)?          # right-associative
    primary := INT | IDENT | IDENT "(" expr ")" | "(" expr ")"

Exponents must reduce to exact rationals.  The identifier ``e`` is Euler's
number, so ``e^x`` parses as ``exp(x)``.
"""

from __future__ import annotations

import re

from .expr import Const, Expr, add, atanh, const, exp, log, mul, power, sqrt, sym

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S))")

_FUNCTIONS = {"exp": exp, "log": log, "sqrt": sqrt, "ArcTanh": atanh}


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset
        self.text = text


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break  # only trailing whitespace left
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(
                    f"unexpected character {ch!r}", len(text[:start].encode("utf-8")), text
                )
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text.encode("utf-8"))))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def offset(self, tok) -> int:
        # report byte offsets
        return len(self.text[: tok[2]].encode("utf-8")) if tok[0] != "end" else tok[2]

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str):
        tok = self.next()
        if tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", self.offset(tok), self.text)
        return tok

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", self.offset(tok), self.text)
        return e

    def expr(self) -> Expr:
        terms = [self.term()]
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            t = self.term()
            terms.append(t if op == "+" else mul(const(-1), t))
        return terms[0] if len(terms) == 1 else add(*terms)

    def term(self) -> Expr:
        factors = [self.unary()]
        while self.peek()[0] in ("*", "/"):
            op = self.next()
            f = self.unary()
            if op[0] == "/":
                try:
                    f = power(f, -1)
                except ZeroDivisionError:
                    raise ParseError("division by zero", self.offset(op), self.text) from None
            factors.append(f)
        return factors[0] if len(factors) == 1 else mul(*factors)

    def unary(self) -> Expr:
        if self.peek()[0] == "-":
            self.next()
            return mul(const(-1), self.unary())
        return self.power()

    def power(self) -> Expr:
        tok = self.peek()
        if tok[0] == "name" and tok[1] == "e" and self.tokens[self.i + 1][0] == "^":
            self.next()
            self.next()
            return exp(self.unary())
        base = self.primary()
        if self.peek()[0] != "^":
            return base
        caret = self.next()
        exponent = self.unary()
        if not isinstance(exponent, Const):
            raise ParseError("exponent must be a rational constant", self.offset(caret), self.text)
        try:
            return power(base, exponent.value)
        except ZeroDivisionError:
            raise ParseError("zero raised to a negative power", self.offset(caret), self.text) from None

    def primary(self) -> Expr:
        tok = self.next()
        kind = tok[0]
        if kind == "int":
            return const(int(tok[1]))
        if kind == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "name":
            if self.peek()[0] == "(":
                fn = _FUNCTIONS.get(tok[1])
                if fn is None:
                    raise ParseError(f"unknown function {tok[1]!r}", self.offset(tok), self.text)
                self.next()
                arg = self.expr()
                self.expect(")")
                try:
                    return fn(arg)
                except ZeroDivisionError as exc:
                    raise ParseError(str(exc), self.offset(tok), self.text) from None
            if tok[1] == "e":
                return exp(const(1))
            return sym(tok[1])
        what = "end of input" if kind == "end" else repr(tok[1])
        raise ParseError(f"unexpected {what}", self.offset(tok), self.text)


def parse(text: str) -> Expr:
    """Parse ``text`` into a normalized expression."""
    return _Parser(text).parse()
