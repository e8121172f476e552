"""Recursive-descent parser for polynomial expressions in x1..xn.

Grammar (whitespace is ignored)::

    expr     := sign? term (('+' | '-') term)*
    term     := factor ('*'? factor)*
    factor   := atom ('^' power)?
    power    := uint | '-' uint | '(' '-'? uint ')'
    atom     := rational | 'i' | 'x' uint | '(' expr ')'
    rational := uint ('/' uint)?

The core grammar (coefficient times monomial, ``(a/b + c/d*i)``
coefficients) is a subset.  Parenthesised sub-expressions and their powers,
e.g. ``(x1+x2)^2``, are expanded while parsing.  Negative powers are only
accepted on monomials.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .polycore import GaussianRational, LaurentPolynomial


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        where = f" at position {pos}"
        if text:
            where += f": {text[:pos]}<HERE>{text[pos:]}"
        super().__init__(message + where)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<var>x\d+)|(?P<imag>i)|(?P<pow>\*\*|\^)|(?P<op>[-+*/()]))"
)


@dataclass
class _Tok:
    kind: str
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[bad]!r}", bad, text)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), start))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, n: int):
        self.text = text
        self.n = n
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None) -> ParseError:
        return ParseError(msg, (tok or self.tok).pos, self.text)

    def advance(self) -> _Tok:
        t = self.tok
        self.i += 1
        return t

    def accept(self, kind: str, value: str | None = None) -> _Tok | None:
        t = self.tok
        if t.kind == kind and (value is None or t.value == value):
            self.i += 1
            return t
        return None

    def expect(self, kind: str, value: str | None = None) -> _Tok:
        t = self.accept(kind, value)
        if t is None:
            want = value or kind
            got = self.tok.value or "end of input"
            raise self.error(f"expected {want!r}, found {got!r}")
        return t

    def parse(self) -> LaurentPolynomial:
        if self.tok.kind == "end":
            raise self.error("empty expression")
        result = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.value!r}")
        return result

    def expr(self) -> LaurentPolynomial:
        sign = 1
        if self.accept("op", "-"):
            sign = -1
        else:
            self.accept("op", "+")
        total = self.term() * sign
        while self.tok.kind == "op" and self.tok.value in "+-":
            op = self.advance().value
            t = self.term()
            total = total + t if op == "+" else total - t
        return total

    def _starts_factor(self) -> bool:
        t = self.tok
        return t.kind in ("num", "var", "imag") or (t.kind == "op" and t.value == "(")

    def term(self) -> LaurentPolynomial:
        prod = self.factor()
        while True:
            if self.accept("op", "*"):
                prod = prod * self.factor()
            elif self._starts_factor():
                prod = prod * self.factor()
            else:
                return prod

    def factor(self) -> LaurentPolynomial:
        start = self.tok
        base = self.atom()
        if self.accept("pow"):
            k = self.power()
            if k < 0 and not base.is_monomial():
                raise self.error("negative power of a non-monomial", start)
            base = base ** k
        return base

    def power(self) -> int:
        if self.accept("op", "("):
            neg = bool(self.accept("op", "-"))
            k = int(self.expect("num").value)
            self.expect("op", ")")
            return -k if neg else k
        neg = bool(self.accept("op", "-"))
        k = int(self.expect("num").value)
        return -k if neg else k

    def atom(self) -> LaurentPolynomial:
        t = self.tok
        if t.kind == "num":
            self.advance()
            value = Fraction(int(t.value))
            if self.accept("op", "/"):
                den = self.tok
                if den.kind != "num":
                    raise self.error("malformed rational: expected denominator")
                self.advance()
                if int(den.value) == 0:
                    raise self.error("malformed rational: zero denominator", den)
                value = value / int(den.value)
            return LaurentPolynomial.constant(self.n, value)
        if t.kind == "imag":
            self.advance()
            return LaurentPolynomial.constant(self.n, GaussianRational(0, 1))
        if t.kind == "var":
            self.advance()
            idx = int(t.value[1:])
            if idx < 1 or idx > self.n:
                raise self.error(f"variable {t.value} outside x1..x{self.n}", t)
            return LaurentPolynomial.variable(self.n, idx)
        if self.accept("op", "("):
            inner = self.expr()
            self.expect("op", ")")
            return inner
        got = t.value or "end of input"
        raise self.error(f"unexpected {got!r}")


def parse(text: str, n: int) -> LaurentPolynomial:
    """Parse ``text`` into a polynomial in x1..xn.

    >>> str(parse("3/2*x1*x2^2 + i*x1", 2))
    'i*x1 + 3/2*x1*x2^2'
    """
    if n < 1:
        raise ValueError("dimension must be at least 1")
    return _Parser(text, n).parse()
