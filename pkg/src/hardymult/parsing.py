"""Text form of Dirichlet polynomials.

Grammar (whitespace ignored)::

    expr    := term (("+" | "-") term)*
    term    := unary ("*" unary)*
    unary   := ("+" | "-") unary | primary
    primary := "(" expr ")" | INT "^" ("-s" | "(-s)") | REAL | REAL "i" | "i"

``INT ^ -s`` is the monomial ``n^{-s}``; a bare number is a constant term.
Products of series are Dirichlet products.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass

from .arith import MAX_INDEX, DirichletPoly, dirichlet_product


class SeriesSyntaxError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<imag>i)
  | (?P<op>[-+*()^])
  | (?P<s>s)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise SeriesSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            out.append(_Tok(kind, m.group(), pos))
        pos = m.end()
    out.append(_Tok("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        raise SeriesSyntaxError(msg, tok.pos, self.text)

    def accept(self, text: str) -> bool:
        if self.tok.kind in ("op", "s") and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            found = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {found!r}")

    def parse(self) -> DirichletPoly:
        if self.tok.kind == "end":
            self.error("empty expression")
        out = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")
        return out

    def expr(self) -> DirichletPoly:
        out = self.term()
        while True:
            if self.accept("+"):
                out = out + self.term()
            elif self.accept("-"):
                out = out - self.term()
            else:
                return out

    def term(self) -> DirichletPoly:
        out = self.unary()
        while self.accept("*"):
            start = self.tok
            rhs = self.unary()
            try:
                out = dirichlet_product(out, rhs)
            except ValueError as exc:
                self.error(str(exc), start)
        return out

    def unary(self) -> DirichletPoly:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.primary()

    def primary(self) -> DirichletPoly:
        tok = self.tok
        if self.accept("("):
            out = self.expr()
            self.expect(")")
            return out
        if tok.kind == "imag":
            self.i += 1
            return DirichletPoly.constant(1j)
        if tok.kind == "num":
            self.i += 1
            if self.tok.kind == "imag":
                self.i += 1
                return DirichletPoly.constant(complex(0.0, float(tok.text)))
            if self.accept("^"):
                self.exponent()
                return self.monomial(tok)
            return DirichletPoly.constant(float(tok.text))
        self.error(f"unexpected {tok.text or 'end of input'!r}")

    def exponent(self) -> None:
        if self.accept("("):
            self.expect("-")
            self.expect("s")
            self.expect(")")
        else:
            self.expect("-")
            self.expect("s")

    def monomial(self, tok: _Tok) -> DirichletPoly:
        if not tok.text.isdigit():
            self.error(f"base {tok.text!r} of n^-s must be a positive integer", tok)
        n = int(tok.text)
        if n == 0:
            self.error("n must be positive, got 0", tok)
        if n > MAX_INDEX:
            self.error(f"n = {tok.text} exceeds 2**63-1", tok)
        return DirichletPoly.monomial(n)


def parse_series(text: str) -> DirichletPoly:
    """Parse an expression such as ``"(1+2^-s)*(1 - 0.5i*3^-s)"``."""
    return _Parser(text).parse()


def _real(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite coefficient {x}")
    if x == int(x) and abs(x) < 2**53:
        return str(int(x))
    return repr(x)


def _coeff(a: complex) -> tuple[str, str]:
    """(sign, magnitude text) for a coefficient."""
    if a.imag == 0:
        return ("-" if a.real < 0 else "+"), _real(abs(a.real))
    if a.real == 0:
        mag = _real(abs(a.imag))
        return ("-" if a.imag < 0 else "+"), ("" if mag == "1" else mag) + "i"
    im = _real(a.imag)
    sep = "" if im.startswith("-") else "+"
    return "+", f"({_real(a.real)}{sep}{im}i)"


def format_series(D: DirichletPoly) -> str:
    """Canonical text: terms by increasing n, ``c*n^-s``, unit coefficients omitted."""
    if D.is_zero():
        return "0"
    parts = []
    for n, a in D:
        sign, mag = _coeff(a)
        if n == 1:
            body = mag
        elif mag == "1":
            body = f"{n}^-s"
        else:
            body = f"{mag}*{n}^-s"
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


def load_series(text: str) -> DirichletPoly:
    """Series from an expression or from its JSON form ``{"terms": [...]}``."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ValueError(f"invalid series JSON: {exc}") from exc
        return DirichletPoly.from_json(obj)
    return parse_series(text)


__all__ = ["SeriesSyntaxError", "parse_series", "format_series", "load_series"]
